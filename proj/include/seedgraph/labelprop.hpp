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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"
#include "seedgraph/simgraph.hpp"

namespace seedgraph {

/// Signed label encoding used for propagation.
inline constexpr double kPositiveScore = 1.0;
inline constexpr double kNegativeScore = -1.0;

/// Clamped propagation state over a row-normalized graph.
struct LpState {
  NormalizedAdjacency w;
  std::vector<double> y0;      // clamp values, 0 for unlabeled nodes
  std::vector<char> clamped;
  std::vector<double> y;       // latest scores
  std::size_t iteration = 0;   // oracle rounds completed

  void clamp(std::size_t node, Label label);
};

struct PropagationResult {
  std::vector<double> scores;
  std::size_t steps = 0;
  bool converged = false;
  double last_delta = 0.0;
};

/// Called after each step (already re-clamped) with the step number and scores.
using StepObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Repeats y <- W y followed by re-clamping, for at most `max_steps` steps,
/// stopping once max |delta y| < eps. Isolated nodes keep their initial score.
PropagationResult propagate(const NormalizedAdjacency& w, std::span<const double> y0,
                            std::span<const char> clamped, std::size_t max_steps, double eps,
                            Exec exec = Exec::parallel, const StepObserver& observer = {});

/// ceil(K0 / max(p_prev, K0 / K_max)), i.e. K0 / p_prev clipped to [K0, K_max].
std::size_t adaptive_k(std::size_t k0, double p_prev, std::size_t k_max);
/// Same rule with p_prev = positives / batch_size, in exact integer arithmetic.
std::size_t adaptive_k(std::size_t k0, std::size_t positives, std::size_t batch_size,
                       std::size_t k_max);

/// Highest-scoring positions among those not excluded; ties by id ascending.
std::vector<std::size_t> select_top_k(std::span<const double> scores,
                                      std::span<const std::string> ids, std::size_t k,
                                      std::span<const char> excluded);

struct LpRunConfig {
  std::size_t k0 = 100;
  std::size_t t_prop = 50;
  double eps = 1e-6;
  std::optional<std::size_t> k_max;  // defaults to 10 * k0
  std::size_t rounds = 20;
  double tau = 0.8;
  std::optional<std::size_t> knn_cap;

  std::size_t effective_k_max() const { return k_max.value_or(10 * k0); }
};

/// Iterative label propagation: one similarity graph over pool and seeds,
/// then per round propagate from every clamp, query the top K unlabeled pool
/// items, clamp the answers and adapt K to the last batch precision.
RunLog run_lp(const Corpus& pool, const Corpus& seeds, const LpRunConfig& cfg, Oracle& oracle,
              const GraphOptions& graph = {});
RunLog run_lp(const Corpus& pool, const Corpus& synthetic, const std::vector<std::string>& seed_ids,
              const LpRunConfig& cfg, Oracle& oracle, const GraphOptions& graph = {});

}  // namespace seedgraph
