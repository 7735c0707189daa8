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
#include <cstdint>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/kernels.hpp"

namespace seedgraph {

enum class SeedMethod { random, acs };
SeedMethod parse_seed_method(const std::string& text);
std::string to_string(SeedMethod method);

struct SeedConfig {
  std::size_t k = 100;
  double c = 0.5;
  SeedMethod method = SeedMethod::random;
  std::uint64_t rng_seed = 7;
};

/// k distinct ids drawn uniformly without replacement.
std::vector<std::string> sample_random_seeds(const Corpus& pool, const SeedConfig& cfg);

struct CoverResult {
  std::vector<std::string> ids;  // selection order
  std::vector<std::size_t> gains;  // newly covered points per pick
  std::size_t covered = 0;
  double radius = 0.0;

  double coverage(std::size_t pool_size) const {
    return pool_size == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(pool_size);
  }
};

/// Greedy max-coverage with neighborhoods {x : cos(x, s) >= radius}; picks at
/// most k points and stops as soon as `target_fraction` of the pool is covered.
/// Ties go to the smaller id.
CoverResult greedy_cover(const Corpus& pool, double radius, std::size_t k, double target_fraction,
                         Exec exec = Exec::parallel);

/// Coverage-based diverse selection: the largest cosine radius (to within
/// 1e-3) at which k greedy picks still cover a c-fraction of the pool.
CoverResult acs_select_detailed(const Corpus& pool, const SeedConfig& cfg,
                                Exec exec = Exec::parallel);
std::vector<std::string> acs_select(const Corpus& pool, const SeedConfig& cfg);

/// Dispatches on cfg.method.
std::vector<std::string> select_seeds(const Corpus& pool, const SeedConfig& cfg);

inline constexpr double kAcsRadiusTolerance = 1e-3;

}  // namespace seedgraph
