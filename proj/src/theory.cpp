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

#include "seedgraph/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "seedgraph/error.hpp"

namespace seedgraph::theory {

namespace {

void check_q(double q1, double q2) {
  if (!(q1 > 0.0 && q1 < q2 && q2 < 2.0 * q1)) {
    throw InvalidArgument("need 0 < q1 < q2 < 2 q1 (q1 = " + std::to_string(q1) +
                          ", q2 = " + std::to_string(q2) + ")");
  }
}

// Portable uniform draw in [0, 1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

bool adjacent(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t u, std::uint32_t v) {
  const auto& a = adj[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

// Random simple d-regular graph: stubs are paired uniformly at random and a
// pair that would form a loop or a multi-edge is redrawn; a construction
// that stalls is restarted.
std::vector<std::vector<std::uint32_t>> random_regular(std::size_t n, std::size_t d,
                                                       std::mt19937_64& rng, std::size_t& attempts,
                                                       std::size_t max_restarts) {
  for (std::size_t restart = 0; restart < max_restarts; ++restart) {
    ++attempts;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto& a : adj) a.reserve(d);
    std::vector<std::uint32_t> stubs;
    stubs.reserve(n * d);
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < d; ++k) stubs.push_back(v);
    }
    std::size_t stalls = 0;
    while (!stubs.empty() && stalls < 2000) {
      const std::size_t i = uniform_index(rng, stubs.size());
      std::size_t j = uniform_index(rng, stubs.size() - 1);
      if (j >= i) ++j;
      const std::uint32_t u = stubs[i], v = stubs[j];
      if (u == v || adjacent(adj, u, v)) {
        ++stalls;
        continue;
      }
      stalls = 0;
      adj[u].push_back(v);
      adj[v].push_back(u);
      // Remove the larger index first so the smaller stays valid.
      const std::size_t hi = std::max(i, j), lo = std::min(i, j);
      stubs[hi] = stubs.back();
      stubs.pop_back();
      stubs[lo] = stubs.back();
      stubs.pop_back();
    }
    if (stubs.empty()) {
      for (auto& a : adj) std::sort(a.begin(), a.end());
      return adj;
    }
  }
  throw InfeasibleError("could not build a simple " + std::to_string(d) + "-regular graph on " +
                        std::to_string(n) + " vertices");
}

}  // namespace

void TheoryParams::validate(bool allow_zero_p) const {
  check_q(q1, q2);
  if (allow_zero_p ? !(p >= 0.0 && p <= 1.0) : !(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("validity p must lie in (0, 1]");
  }
  if (!(h >= 1.0 && h <= static_cast<double>(d) + 1.0)) {
    throw InvalidArgument("expansion ratio h must lie in [1, d + 1]");
  }
  if (d < 1) throw InvalidArgument("degree d must be at least 1");
}

double q2_from_q1(double q1) {
  if (!(q1 > 0.0 && q1 < 1.0)) throw InvalidArgument("q1 must lie in (0, 1)");
  const double r = 1.0 - q1;
  return 1.0 - r * r;
}

double expected_precision(const TheoryParams& t) {
  t.validate();
  const double d = static_cast<double>(t.d);
  const double num = 1.0 + t.q2 * (d + 1.0 / t.p) - t.q1 * (d + 2.0 / t.p);
  return (2.0 * t.q1 - t.q2) + num / ((1.0 - t.p) / t.p + t.h);
}

double expected_precision_unsimplified(const TheoryParams& t) {
  t.validate();
  const double d = static_cast<double>(t.d);
  const double per_seed = (1.0 - 2.0 * t.q1 + t.q2) + (t.q2 - t.q1) * d + (2.0 * t.q1 - t.q2) * t.h;
  return t.p * per_seed / (1.0 - t.p + t.p * t.h);
}

double expected_recall(const TheoryParams& t) {
  t.validate(true);
  if (t.v_size == 0) throw InvalidArgument("|V| must be positive");
  const double d = static_cast<double>(t.d);
  const double per_seed = (1.0 - 2.0 * t.q1 + t.q2) + (t.q2 - t.q1) * d + (2.0 * t.q1 - t.q2) * t.h;
  return t.p * static_cast<double>(t.s_size) / static_cast<double>(t.v_size) * per_seed;
}

double precision_threshold(double q1, double q2, std::size_t d) {
  check_q(q1, q2);
  return (2.0 * q1 - q2) / (1.0 + (q2 - q1) * static_cast<double>(d));
}

double precision_slope_in_h(const TheoryParams& t) {
  t.validate();
  const double d = static_cast<double>(t.d);
  const double num = 1.0 + t.q2 * (d + 1.0 / t.p) - t.q1 * (d + 2.0 / t.p);
  const double den = (1.0 - t.p) / t.p + t.h;
  return -num / (den * den);
}

std::pair<double, double> s1_s2_counts(double h, std::size_t d, double s_plus) {
  const double dd = static_cast<double>(d);
  if (!(h >= 1.0 && h <= dd + 1.0)) throw InvalidArgument("h must lie in [1, d + 1]");
  const double s1 = (2.0 * h - dd - 2.0) * s_plus;
  const double s2 = (dd + 1.0 - h) * s_plus;
  if (s1 < 0.0) {
    throw InvalidArgument("infeasible: |S1| = (2h - d - 2)|S+| < 0; need h >= (d + 2) / 2 = " +
                          std::to_string((dd + 2.0) / 2.0));
  }
  return {s1, s2};
}

std::pair<long long, long long> s1_s2_counts_exact(long long neighborhood, std::size_t d,
                                                   long long s_plus) {
  const auto dd = static_cast<long long>(d);
  const long long s1 = 2 * neighborhood - (dd + 2) * s_plus;
  const long long s2 = (dd + 1) * s_plus - neighborhood;
  if (s1 < 0 || s2 < 0) {
    throw InvalidArgument("infeasible neighborhood size " + std::to_string(neighborhood) +
                          " for |S+| = " + std::to_string(s_plus) + ", d = " + std::to_string(d));
  }
  return {s1, s2};
}

// --- planted graphs ------------------------------------------------------------

std::size_t PlantedGraph::s_plus() const {
  std::size_t k = 0;
  for (auto s : seeds) k += seed_positive[s] != 0;
  return k;
}

std::size_t PlantedGraph::closed_neighborhood_size() const {
  std::size_t k = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const bool pos_seed = in_seeds[v] && seed_positive[v];
    k += pos_seed || (positive_seed_neighbors[v] > 0);
  }
  return k;
}

double PlantedGraph::measured_h() const {
  const std::size_t sp = s_plus();
  return sp == 0 ? 0.0 : static_cast<double>(closed_neighborhood_size()) / static_cast<double>(sp);
}

double PlantedGraph::realized_p() const {
  return seeds.empty() ? 0.0 : static_cast<double>(s_plus()) / static_cast<double>(seeds.size());
}

std::pair<std::size_t, std::size_t> PlantedGraph::s1_s2() const {
  std::size_t one = 0, two = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_seeds[v]) continue;
    one += positive_seed_neighbors[v] == 1;
    two += positive_seed_neighbors[v] == 2;
  }
  return {one, two};
}

void check_planted(const PlantedGraph& g) {
  if (g.adjacency.size() != g.n) throw InvalidArgument("adjacency size mismatch");
  for (std::uint32_t v = 0; v < g.n; ++v) {
    const auto& a = g.adjacency[v];
    if (a.size() != g.d) throw InvalidArgument("vertex " + std::to_string(v) + " has degree " + std::to_string(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == v) throw InvalidArgument("self-loop at " + std::to_string(v));
      if (k > 0 && a[k] == a[k - 1]) throw InvalidArgument("multi-edge at " + std::to_string(v));
      if (!adjacent(g.adjacency, a[k], v)) throw InvalidArgument("asymmetric edge");
    }
  }
  for (std::uint32_t v = 0; v < g.n; ++v) {
    std::size_t touching = 0;
    for (auto u : g.adjacency[v]) touching += g.in_seeds[u] != 0;
    if (g.in_seeds[v] && touching > 0) throw InvalidArgument("seed set is not independent");
    if (touching > 2) throw InvalidArgument("vertex " + std::to_string(v) + " touches more than two seeds");
  }
}

PlantedGraph generate_planted(std::size_t n, std::size_t d, std::size_t s_size, double p,
                              std::uint64_t rng_seed, const PlantOptions& options) {
  if (d < 1 || d >= n) throw InvalidArgument("need 1 <= d < n");
  if ((n * d) % 2 != 0) throw InvalidArgument("n * d must be even (handshake parity)");
  if (s_size < 1) throw InvalidArgument("seed set must be nonempty");
  if (s_size * (d + 1) > n) throw InvalidArgument("need |S| (d + 1) <= n");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("validity p must lie in (0, 1]");
  if (d > 255) throw InvalidArgument("degree above 255 is not supported");

  std::mt19937_64 rng(rng_seed);
  PlantedGraph g;
  g.n = n;
  g.d = d;
  double bias = 0.5, lo = 0.0, hi = 1.0;

  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    g.adjacency = random_regular(n, d, rng, g.attempts, options.max_retries);

    // Greedy planting of S under independence and the two-seed overlap cap.
    std::vector<std::uint8_t> touching(n, 0);
    g.in_seeds.assign(n, 0);
    g.seeds.clear();
    std::vector<std::uint32_t> fresh, overlapping;
    while (g.seeds.size() < s_size) {
      fresh.clear();
      overlapping.clear();
      for (std::uint32_t v = 0; v < n; ++v) {
        if (g.in_seeds[v] || touching[v] != 0) continue;
        bool ok = true, overlaps = false;
        for (auto u : g.adjacency[v]) {
          if (touching[u] >= 2) ok = false;
          if (touching[u] == 1) overlaps = true;
        }
        if (!ok) continue;
        (overlaps ? overlapping : fresh).push_back(v);
      }
      if (fresh.empty() && overlapping.empty()) break;
      const std::vector<std::uint32_t>* from;
      if (!options.h_target) {
        from = nullptr;
      } else if (overlapping.empty()) {
        from = &fresh;
      } else if (fresh.empty()) {
        from = &overlapping;
      } else {
        from = uniform01(rng) < bias ? &overlapping : &fresh;
      }
      std::uint32_t pick;
      if (from) {
        pick = (*from)[uniform_index(rng, from->size())];
      } else {
        const std::size_t total = fresh.size() + overlapping.size();
        const std::size_t k = uniform_index(rng, total);
        pick = k < fresh.size() ? fresh[k] : overlapping[k - fresh.size()];
      }
      g.in_seeds[pick] = 1;
      g.seeds.push_back(pick);
      for (auto u : g.adjacency[pick]) ++touching[u];
    }
    if (g.seeds.size() < s_size) continue;
    std::sort(g.seeds.begin(), g.seeds.end());

    g.seed_positive.assign(n, 0);
    for (auto s : g.seeds) g.seed_positive[s] = uniform01(rng) < p;
    if (g.s_plus() == 0) continue;

    g.positive_seed_neighbors.assign(n, 0);
    for (auto s : g.seeds) {
      if (!g.seed_positive[s]) continue;
      for (auto u : g.adjacency[s]) ++g.positive_seed_neighbors[u];
    }
    if (!options.h_target) return g;

    const double h = g.measured_h();
    if (std::abs(h - *options.h_target) <= options.h_tolerance) return g;
    // Too diverse: plant more overlapping seeds next time, and vice versa.
    (h > *options.h_target ? lo : hi) = bias;
    if (hi - lo < 1e-3) {
      lo = 0.0;
      hi = 1.0;
    }
    bias = 0.5 * (lo + hi);
  }
  throw InfeasibleError("planting failed after " + std::to_string(options.max_retries) +
                        " attempts (seed " + std::to_string(rng_seed) + ", " +
                        std::to_string(g.attempts) + " graph constructions)");
}

std::vector<char> realize_labels(const PlantedGraph& g, double q1, double q2, std::uint64_t stream) {
  auto rng = stream_rng(stream, 0x5eedULL);
  std::vector<char> y(g.n, 0);
  for (std::size_t v = 0; v < g.n; ++v) {
    if (g.in_seeds[v]) {
      y[v] = g.seed_positive[v];
    } else if (g.positive_seed_neighbors[v] == 1) {
      y[v] = uniform01(rng) < q1;
    } else if (g.positive_seed_neighbors[v] == 2) {
      y[v] = uniform01(rng) < q2;
    }
  }
  return y;
}

bool MonteCarloResult::precision_within(double k_se) const {
  return std::abs(mean_precision - closed_precision) <= k_se * se_precision;
}

bool MonteCarloResult::recall_within(double k_se) const {
  return std::abs(mean_recall - closed_recall) <= k_se * se_recall;
}

MonteCarloResult monte_carlo(const TheoryParams& params, std::size_t n, std::size_t trials,
                             std::uint64_t rng_seed, Exec exec, const PlantOptions& options) {
  check_q(params.q1, params.q2);
  if (trials < 2) throw InvalidArgument("need at least two trials");
  const PlantedGraph g = generate_planted(n, params.d, params.s_size, params.p, rng_seed, options);

  MonteCarloResult r;
  r.trials = trials;
  r.attempts = g.attempts;
  r.s_plus = g.s_plus();
  r.measured_h = g.measured_h();
  r.realized_p = g.realized_p();
  r.queried = (g.seeds.size() - r.s_plus) + g.closed_neighborhood_size();

  TheoryParams at = params;
  at.p = r.realized_p;
  at.h = r.measured_h;
  at.v_size = n;
  at.s_size = g.seeds.size();
  r.closed_precision = expected_precision(at);
  r.closed_recall = expected_recall(at);

  // Only vertices touching a positive seed carry randomness.
  std::vector<std::uint8_t> touch;
  for (std::size_t v = 0; v < n; ++v) {
    if (!g.in_seeds[v] && g.positive_seed_neighbors[v] > 0) touch.push_back(g.positive_seed_neighbors[v]);
  }
  std::vector<double> positives(trials);
  auto trial = [&](std::size_t t) {
    auto rng = stream_rng(rng_seed, t + 1);
    std::size_t pos = r.s_plus;
    for (auto m : touch) pos += uniform01(rng) < (m == 1 ? params.q1 : params.q2);
    positives[t] = static_cast<double>(pos);
  };
  const auto count = static_cast<std::ptrdiff_t>(trials);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) trial(static_cast<std::size_t>(t));
  } else {
    for (std::ptrdiff_t t = 0; t < count; ++t) trial(static_cast<std::size_t>(t));
  }

  auto summarize = [&](double denom, double& mean, double& se) {
    double sum = 0.0;
    for (double x : positives) sum += x / denom;
    mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double x : positives) ss += (x / denom - mean) * (x / denom - mean);
    const double var = ss / static_cast<double>(trials - 1);
    se = std::sqrt(var / static_cast<double>(trials));
  };
  summarize(static_cast<double>(r.queried), r.mean_precision, r.se_precision);
  summarize(static_cast<double>(n), r.mean_recall, r.se_recall);
  return r;
}

}  // namespace seedgraph::theory
