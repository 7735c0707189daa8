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

// Single-round analysis of seed expansion on a d-regular graph: closed-form
// expected precision and recall as functions of seed validity p and the
// expansion ratio h of the positive seeds, plus a Monte Carlo harness on
// planted graphs that checks them.
//
// Neighborhoods are closed: N(S+) contains S+ itself, so h lies in [1, d+1].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "seedgraph/kernels.hpp"

namespace seedgraph::theory {

struct TheoryParams {
  std::size_t d = 10;
  double p = 1.0;     // |S+| / |S|
  double q1 = 0.5;    // P(positive | adjacent to exactly one positive seed)
  double q2 = 0.75;   // P(positive | adjacent to exactly two positive seeds)
  double h = 11.0;    // |N[S+]| / |S+|
  std::size_t s_size = 50;
  std::size_t v_size = 2000;

  /// Throws InvalidArgument unless 0 < q1 < q2 < 2 q1, 1 <= h <= d + 1 and
  /// p lies in (0, 1] (or [0, 1] when `allow_zero_p`).
  void validate(bool allow_zero_p = false) const;
};

/// q2 under independent per-seed assignment: 1 - (1 - q1)^2.
double q2_from_q1(double q1);

/// (2 q1 - q2) + (1 + q2 (d + 1/p) - q1 (d + 2/p)) / ((1 - p)/p + h).
double expected_precision(const TheoryParams& params);
/// p ((1 - 2 q1 + q2) + (q2 - q1) d + (2 q1 - q2) h) / (1 - p + p h): the
/// same quantity before simplification.
double expected_precision_unsimplified(const TheoryParams& params);
/// p |S| / |V| ((1 - 2 q1 + q2) + (q2 - q1) d + (2 q1 - q2) h).
double expected_recall(const TheoryParams& params);

/// Validity level at which the sign of d(precision)/dh flips:
/// (2 q1 - q2) / (1 + (q2 - q1) d).
double precision_threshold(double q1, double q2, std::size_t d);

/// d(expected_precision)/dh in closed form.
double precision_slope_in_h(const TheoryParams& params);

/// Seeds-neighborhood counts: |S1| = (2h - d - 2)|S+|, |S2| = (d + 1 - h)|S+|.
std::pair<double, double> s1_s2_counts(double h, std::size_t d, double s_plus);
/// Exact integer form given |N[S+]| directly.
std::pair<long long, long long> s1_s2_counts_exact(long long neighborhood, std::size_t d,
                                                   long long s_plus);

struct PlantedGraph {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::vector<std::uint32_t>> adjacency;
  std::vector<std::uint32_t> seeds;       // S
  std::vector<char> in_seeds;
  std::vector<char> seed_positive;        // per vertex; meaningful for seeds only
  std::vector<std::uint8_t> positive_seed_neighbors;  // |N(v) ∩ S+| for every v
  std::size_t attempts = 0;               // constructions tried

  std::size_t s_plus() const;
  /// |N[S+]|: positive seeds plus their distinct neighbors.
  std::size_t closed_neighborhood_size() const;
  double measured_h() const;
  double realized_p() const;
  /// Non-seed vertices adjacent to exactly one / two positive seeds.
  std::pair<std::size_t, std::size_t> s1_s2() const;
};

struct PlantOptions {
  std::optional<double> h_target;   // accept when |h - target| <= h_tolerance
  double h_tolerance = 0.25;
  std::size_t max_retries = 100;
};

/// Random simple d-regular graph with a planted seed set S that is
/// independent and where no vertex touches more than two seeds; S+ is drawn
/// by an independent p-coin per seed (at least one positive seed is kept).
PlantedGraph generate_planted(std::size_t n, std::size_t d, std::size_t s_size, double p,
                              std::uint64_t rng_seed, const PlantOptions& options = {});

/// Throws unless `g` is simple, d-regular and satisfies both seed conditions.
void check_planted(const PlantedGraph& g);

/// Labels for one realization: seeds carry their coin, a non-seed vertex
/// touching m in {1, 2} positive seeds is positive with probability q_m,
/// every other vertex is negative.
std::vector<char> realize_labels(const PlantedGraph& g, double q1, double q2, std::uint64_t stream);

struct MonteCarloResult {
  double measured_h = 0.0;
  double realized_p = 0.0;
  std::size_t s_plus = 0;
  std::size_t queried = 0;             // |Q| = |S-| + |N[S+]|
  std::size_t trials = 0;
  double mean_precision = 0.0;         // E[P / |Q|]
  double se_precision = 0.0;
  double mean_recall = 0.0;            // E[P / |V|]
  double se_recall = 0.0;
  double closed_precision = 0.0;       // at measured h and realized p
  double closed_recall = 0.0;
  std::size_t attempts = 0;

  bool precision_within(double k_se) const;
  bool recall_within(double k_se) const;
};

/// Monte Carlo estimate over `trials` label realizations of one planted
/// graph. Trial t draws from its own stream derived from (rng_seed, t).
MonteCarloResult monte_carlo(const TheoryParams& params, std::size_t n, std::size_t trials,
                             std::uint64_t rng_seed, Exec exec = Exec::parallel,
                             const PlantOptions& options = {});

}  // namespace seedgraph::theory
