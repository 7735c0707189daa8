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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"

namespace testing {

using seedgraph::Corpus;
using seedgraph::Label;
using seedgraph::Source;

struct Row {
  std::string id;
  std::vector<float> v;
  std::optional<Label> y = std::nullopt;
};

inline Corpus corpus(const std::vector<Row>& rows, Source source = Source::real) {
  Corpus c(rows.empty() ? 0 : rows.front().v.size());
  for (const auto& r : rows) {
    c.append(seedgraph::Record{r.id, std::nullopt, r.y, source}, r.v);
  }
  return c;
}

// Unit vector at `deg` degrees in the plane of the first two axes.
inline std::vector<float> angle(double deg, std::size_t dim = 2) {
  std::vector<float> v(dim, 0.0f);
  const double r = deg * std::acos(-1.0) / 180.0;
  v[0] = static_cast<float>(std::cos(r));
  v[1] = static_cast<float>(std::sin(r));
  return v;
}

inline Corpus random_unit_corpus(std::size_t n, std::size_t dim, std::uint64_t seed,
                                 const std::string& prefix = "x", Source source = Source::real) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Corpus c(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    std::vector<double> g(dim);
    for (auto& x : g) {
      x = nd(rng);
      s += x * x;
    }
    s = std::sqrt(s);
    for (std::size_t k = 0; k < dim; ++k) v[k] = static_cast<float>(g[k] / s);
    seedgraph::Record rec;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%05zu", prefix.c_str(), i);
    rec.id = buf;
    rec.source = source;
    c.append(rec, v);
  }
  return c;
}

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("seedgraph-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
