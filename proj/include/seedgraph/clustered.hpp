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

// Generated benchmark corpus: a real pool of Gaussian clusters on the unit
// sphere with a rare positive class, and a synthetic seed pool that imitates
// generated positives (skewed across positive clusters, slightly shifted,
// with a share of off-target points near negative clusters).

#include <cstddef>
#include <cstdint>

#include "seedgraph/dataset.hpp"

namespace seedgraph {

struct ClusteredSpec {
  std::size_t n_real = 10000;
  std::size_t dim = 64;
  double positive_fraction = 0.10;
  std::size_t positive_clusters = 10;
  std::size_t negative_clusters = 90;
  double positive_axis_weight = 0.7071;  // cos between positive centers ~ weight^2
  double max_cross_cosine = 0.3;        // between positive and negative centers
  double noise = 0.0625;                // per-coordinate sigma around a center

  std::size_t n_synthetic = 2488;
  double off_target_fraction = 0.3;
  double zipf_exponent = 1.2;
  std::size_t unrepresented_clusters = 3;
  double synthetic_shift = 0.15;        // norm of a per-cluster offset
  double synthetic_noise = 0.08;
  double off_target_noise = 0.09;
  std::uint64_t seed = 7;
  /// Draws the synthetic pool from its own stream so it can vary while the
  /// real pool stays fixed.
  std::uint64_t synthetic_seed = 7;
};

struct ClusteredData {
  Corpus real;       // unit vectors with truth labels, ids r00000...
  Corpus synthetic;  // unit vectors, truth = on-target, ids s00000...
  std::vector<std::size_t> real_cluster;       // cluster index per real row
  std::vector<std::size_t> synthetic_cluster;  // nearest-center cluster per synthetic row
  std::vector<std::size_t> positive_cluster_ids;
};

ClusteredData generate_clustered(const ClusteredSpec& spec);

/// Largest cosine between any positive and any negative cluster center.
double max_center_cross_cosine(const ClusteredSpec& spec);

}  // namespace seedgraph
