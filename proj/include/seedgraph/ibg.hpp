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
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"
#include "seedgraph/simgraph.hpp"

namespace seedgraph {

struct IbgConfig {
  double tau = 0.8;
  std::size_t d_max = 32;
  std::size_t iterations = 10;  // T
  bool stop_on_empty_batch = true;
};

/// Iterative bipartite expansion. Each round connects the current known
/// positives (seeds plus confirmed real positives) to the still-unlabeled
/// pool with the threshold-and-cap rule, queries every connected pool item,
/// absorbs the confirmed positives and drops every queried item from the pool.
RunLog run_ibg(const Corpus& pool, const Corpus& seeds, const IbgConfig& cfg, Oracle& oracle,
               const GraphOptions& graph = {});

/// `seed_ids` are looked up in `synthetic`.
RunLog run_ibg(const Corpus& pool, const Corpus& synthetic, const std::vector<std::string>& seed_ids,
               const IbgConfig& cfg, Oracle& oracle, const GraphOptions& graph = {});

/// Throws unless pool and seeds share a dimension and have disjoint ids.
void check_pool_and_seeds(const Corpus& pool, const Corpus& seeds);

}  // namespace seedgraph
