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

#include "seedgraph/ledger.hpp"

#include <filesystem>

#include <json.hpp>

namespace seedgraph {

using nlohmann::json;

std::string format_ledger_line(const LedgerEntry& e) {
  json obj;
  obj["run"] = e.run;
  obj["iter"] = e.iter;
  obj["id"] = e.id;
  obj["label"] = to_string(e.label);
  obj["source"] = e.source;
  return obj.dump();
}

LedgerEntry parse_ledger_line(const std::string& line) {
  try {
    const json obj = json::parse(line);
    LedgerEntry e;
    e.run = obj.at("run").get<std::string>();
    e.iter = obj.at("iter").get<std::size_t>();
    e.id = obj.at("id").get<std::string>();
    e.label = parse_label(obj.at("label").get<std::string>());
    e.source = obj.at("source").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw DatasetError(std::string("malformed ledger line: ") + ex.what());
  }
}

std::vector<LedgerEntry> read_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open ledger " + path);
  std::vector<LedgerEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_ledger_line(line));
    } catch (const DatasetError& e) {
      throw DatasetError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

RunLog runlog_from_ledger(const std::vector<LedgerEntry>& entries, const std::string& run) {
  RunLog log;
  for (const auto& e : entries) {
    if (!run.empty() && e.run != run) continue;
    if (log.batches.empty() || log.batches.back().iteration != e.iter) {
      log.batches.push_back(BatchRecord{});
      log.batches.back().iteration = e.iter;
    }
    log.batches.back().ids.push_back(e.id);
    log.batches.back().labels.push_back(e.label);
  }
  for (auto& b : log.batches) {
    b.precision = static_cast<double>(b.positives()) / static_cast<double>(b.ids.size());
  }
  return log;
}

Ledger::Ledger(std::string path, std::string run_id) : path_(std::move(path)), run_(std::move(run_id)) {
  if (std::filesystem::exists(path_)) {
    for (auto& e : read_ledger(path_)) {
      if (e.run != run_) continue;
      by_id_[e.id] = e.label;
      entries_.push_back(std::move(e));
    }
  }
  out_.open(path_, std::ios::app);
  if (!out_) throw DatasetError("cannot open ledger " + path_ + " for appending");
}

std::vector<LedgerEntry> Ledger::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::optional<Label> Ledger::lookup(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Ledger::conflicts(const Labels& labels) const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, label] : labels) {
    auto it = by_id_.find(id);
    if (it != by_id_.end() && it->second != label) out.push_back(id);
  }
  return out;
}

void Ledger::append(std::size_t iter, const std::vector<std::string>& order, const Labels& labels,
                    const std::string& source) {
  std::lock_guard lock(mu_);
  std::vector<std::string> bad;
  for (const auto& id : order) {
    auto l = labels.find(id);
    if (l == labels.end()) throw InvalidArgument("no label for \"" + id + "\"");
    auto it = by_id_.find(id);
    if (it != by_id_.end() && it->second != l->second) bad.push_back(id);
  }
  if (!bad.empty()) {
    throw LedgerConflict(bad, "label contradicts the ledger for \"" + bad.front() + "\"");
  }
  for (const auto& id : order) {
    if (by_id_.contains(id)) continue;
    LedgerEntry e{run_, iter, id, labels.at(id), source};
    out_ << format_ledger_line(e) << '\n';
    by_id_.emplace(id, e.label);
    entries_.push_back(std::move(e));
  }
  out_.flush();
  if (!out_) throw DatasetError("failed writing ledger " + path_);
}

Labels RecordingOracle::label(const LabelBatch& batch) {
  Labels known;
  LabelBatch missing = batch;
  missing.items.clear();
  for (const auto& item : batch.items) {
    if (auto l = ledger_.lookup(item.id)) {
      known.emplace(item.id, *l);
    } else {
      missing.items.push_back(item);
    }
  }
  if (missing.items.empty()) {
    ++replayed_;
    return known;
  }
  Labels fresh = inner_.label(missing);
  check_answer(missing, fresh);
  std::vector<std::string> order;
  order.reserve(missing.items.size());
  for (const auto& item : missing.items) order.push_back(item.id);
  ledger_.append(batch.iteration, order, fresh, inner_.source());
  known.insert(fresh.begin(), fresh.end());
  return known;
}

}  // namespace seedgraph
