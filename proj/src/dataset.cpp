/*
 * Copyright (c) 2026, The seedgraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seedgraph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "seedgraph/error.hpp"
#include "seedgraph/kernels.hpp"

namespace seedgraph {

using nlohmann::json;

std::string_view to_string(Label label) {
  return label == Label::positive ? "positive" : "negative";
}

Label parse_label(std::string_view text) {
  if (text == "positive") return Label::positive;
  if (text == "negative") return Label::negative;
  throw InvalidArgument("label must be \"positive\" or \"negative\", got \"" + std::string(text) +
                        "\"");
}

Corpus::Corpus(std::size_t dimension) : dimension_(dimension) {}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::position(std::string_view id) const {
  if (auto pos = find(id)) return *pos;
  throw InvalidArgument("unknown id \"" + std::string(id) + "\"");
}

void Corpus::append(Record record, std::span<const float> embedding) {
  if (record.id.empty()) throw DatasetError("record id must be nonempty");
  if (dimension_ == 0) {
    if (embedding.empty()) throw DatasetError("embedding for \"" + record.id + "\" is empty");
    dimension_ = embedding.size();
  }
  if (embedding.size() != dimension_) {
    throw DatasetError("embedding for \"" + record.id + "\" has dimension " +
                       std::to_string(embedding.size()) + ", expected " +
                       std::to_string(dimension_));
  }
  for (float v : embedding) {
    if (!std::isfinite(v)) throw DatasetError("non-finite value in embedding of \"" + record.id + "\"");
  }
  if (index_.contains(record.id)) throw DatasetError("duplicate id \"" + record.id + "\"");
  index_.emplace(record.id, records_.size());
  data_.insert(data_.end(), embedding.begin(), embedding.end());
  records_.push_back(std::move(record));
}

std::size_t Corpus::count_positive() const {
  std::size_t n = 0;
  for (const auto& r : records_) n += (r.truth == Label::positive);
  return n;
}

bool Corpus::all_labeled() const {
  for (const auto& r : records_) {
    if (!r.truth) return false;
  }
  return true;
}

Corpus parse_corpus(std::istream& in, Source source, std::string_view origin) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(where() + "malformed line (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DatasetError(where() + "malformed line (expected a JSON object)");

    Record record;
    record.source = source;
    try {
      record.id = obj.at("id").get<std::string>();
      if (auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
        record.text = it->get<std::string>();
      }
      if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
        record.truth = parse_label(it->get<std::string>());
      }
      const auto& emb = obj.at("embedding");
      if (!emb.is_array()) throw DatasetError("embedding must be an array");
      values.clear();
      values.reserve(emb.size());
      for (const auto& v : emb) {
        if (!v.is_number()) throw DatasetError("non-numeric embedding entry");
        values.push_back(v.get<float>());
      }
    } catch (const json::exception& e) {
      throw DatasetError(where() + "malformed line (" + e.what() + ")");
    } catch (const Error& e) {
      throw DatasetError(where() + e.what());
    }
    if (!corpus.empty() && values.size() != corpus.dimension()) {
      throw DatasetError(where() + "dimension mismatch: got " + std::to_string(values.size()) +
                         ", expected " + std::to_string(corpus.dimension()));
    }
    try {
      corpus.append(std::move(record), values);
    } catch (const DatasetError& e) {
      throw DatasetError(where() + e.what());
    }
  }
  if (corpus.empty()) throw DatasetError(std::string(origin) + ": empty corpus");
  return corpus;
}

Corpus load_corpus(const std::string& path, Source source) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path);
  return parse_corpus(in, source, path);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Record& r = corpus.record(i);
    json obj;
    obj["id"] = r.id;
    if (r.text) obj["text"] = *r.text;
    auto emb = corpus.embedding(i);
    obj["embedding"] = std::vector<float>(emb.begin(), emb.end());
    if (r.truth) obj["label"] = to_string(*r.truth);
    out << obj.dump() << '\n';
  }
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  write_corpus(out, corpus);
}

Corpus normalize_unit(const Corpus& corpus) {
  Corpus result(corpus.dimension());
  std::vector<float> row(corpus.dimension());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto emb = corpus.embedding(i);
    const double norm = std::sqrt(dot(emb, emb));
    if (norm == 0.0) throw DatasetError("zero-norm embedding for \"" + corpus.id(i) + "\"");
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] = static_cast<float>(static_cast<double>(emb[k]) / norm);
    }
    result.append(corpus.record(i), row);
  }
  return result;
}

double dot(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  return kernels::dot(a.data(), b.data(), a.size());
}

double cosine(std::span<const float> a, std::span<const float> b) {
  const double ab = dot(a, b);
  const double aa = dot(a, a);
  const double bb = dot(b, b);
  if (aa == 0.0 || bb == 0.0) throw InvalidArgument("cosine of a zero-norm vector");
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

Corpus concat(const Corpus& a, const Corpus& b) {
  if (!a.empty() && !b.empty() && a.dimension() != b.dimension()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                          std::to_string(b.dimension()));
  }
  Corpus out(a.empty() ? b.dimension() : a.dimension());
  for (std::size_t i = 0; i < a.size(); ++i) out.append(a.record(i), a.embedding(i));
  for (std::size_t i = 0; i < b.size(); ++i) out.append(b.record(i), b.embedding(i));
  return out;
}

Corpus subset(const Corpus& corpus, std::span<const std::size_t> positions) {
  Corpus out(corpus.dimension());
  for (std::size_t p : positions) out.append(corpus.record(p), corpus.embedding(p));
  return out;
}

}  // namespace seedgraph
