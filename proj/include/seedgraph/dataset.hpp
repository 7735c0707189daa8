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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seedgraph {

enum class Label { negative, positive };
enum class Source { real, synthetic };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

/// Metadata of one embedded item. The vector itself lives in the owning
/// Corpus so that kernels can walk a contiguous row-major matrix.
struct Record {
  std::string id;
  std::optional<std::string> text;
  std::optional<Label> truth;
  Source source = Source::real;
};

/// An ordered, id-indexed collection of equal-length embeddings.
///
/// Positions are assigned in insertion (file) order and never change. The
/// corpus is immutable once loaded apart from `append`, which working copies
/// inside the algorithms use.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::size_t dimension);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }

  const Record& record(std::size_t pos) const { return records_.at(pos); }
  const std::vector<Record>& records() const noexcept { return records_; }
  const std::string& id(std::size_t pos) const { return records_[pos].id; }

  std::span<const float> embedding(std::size_t pos) const {
    return {data_.data() + pos * dimension_, dimension_};
  }
  /// Row-major storage, `size() * dimension()` values.
  std::span<const float> matrix() const noexcept { return data_; }

  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t position(std::string_view id) const;  // throws if absent
  bool contains(std::string_view id) const { return find(id).has_value(); }

  /// Appends a record; validates dimension, finiteness and id uniqueness.
  void append(Record record, std::span<const float> embedding);

  /// Number of records with truth == positive.
  std::size_t count_positive() const;
  bool all_labeled() const;

 private:
  std::size_t dimension_ = 0;
  std::vector<Record> records_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses line-delimited JSON records. `origin` prefixes error messages.
Corpus parse_corpus(std::istream& in, Source source, std::string_view origin = "<stream>");
Corpus load_corpus(const std::string& path, Source source);

/// Writes records in the same line-delimited format `load_corpus` reads.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

/// Scales every embedding to unit L2 norm. Throws on a zero-norm row.
Corpus normalize_unit(const Corpus& corpus);

/// Fixed left-to-right dot product with 64-bit accumulation.
double dot(std::span<const float> a, std::span<const float> b);
double cosine(std::span<const float> a, std::span<const float> b);

/// Positions `[0, a.size())` hold `a`, the rest hold `b`. Ids must be disjoint.
Corpus concat(const Corpus& a, const Corpus& b);

/// Copy of `corpus` restricted to `positions`, in that order.
Corpus subset(const Corpus& corpus, std::span<const std::size_t> positions);

}  // namespace seedgraph
