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

#include "seedgraph/labelprop.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "seedgraph/error.hpp"
#include "seedgraph/ibg.hpp"

namespace seedgraph {

void LpState::clamp(std::size_t node, Label label) {
  y0.at(node) = label == Label::positive ? kPositiveScore : kNegativeScore;
  clamped.at(node) = 1;
}

PropagationResult propagate(const NormalizedAdjacency& w, std::span<const double> y0,
                            std::span<const char> clamped, std::size_t max_steps, double eps,
                            Exec exec, const StepObserver& observer) {
  const std::size_t n = w.size();
  if (y0.size() != n || clamped.size() != n) throw InvalidArgument("score vector size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (clamped[i] && y0[i] != kPositiveScore && y0[i] != kNegativeScore) {
      throw InvalidArgument("clamped scores must be +1 or -1");
    }
  }
  PropagationResult res;
  res.scores.assign(y0.begin(), y0.end());
  std::vector<double> next(n);
  for (std::size_t step = 1; step <= max_steps; ++step) {
    kernels::spmv(w.w, res.scores, next, exec);
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i] || w.degree[i] == 0) next[i] = y0[i];
    }
    res.last_delta = kernels::max_abs_diff(next, res.scores, exec);
    res.scores.swap(next);
    res.steps = step;
    if (observer) observer(step, res.scores);
    if (res.last_delta < eps) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::size_t adaptive_k(std::size_t k0, double p_prev, std::size_t k_max) {
  if (k0 < 1) throw InvalidArgument("K0 must be at least 1");
  if (k_max < k0) throw InvalidArgument("K_max must be at least K0");
  if (!(p_prev >= 0.0 && p_prev <= 1.0)) throw InvalidArgument("p_prev must lie in [0, 1]");
  const double floor_p = static_cast<double>(k0) / static_cast<double>(k_max);
  const double x = static_cast<double>(k0) / std::max(p_prev, floor_p);
  // Quotients that are integers up to rounding must not ceil past themselves.
  const double nearest = std::round(x);
  const double k = std::abs(x - nearest) <= 1e-9 * x ? nearest : std::ceil(x);
  return std::clamp(static_cast<std::size_t>(k), k0, k_max);
}

std::size_t adaptive_k(std::size_t k0, std::size_t positives, std::size_t batch_size,
                       std::size_t k_max) {
  if (k0 < 1) throw InvalidArgument("K0 must be at least 1");
  if (k_max < k0) throw InvalidArgument("K_max must be at least K0");
  if (batch_size == 0 || positives > batch_size) throw InvalidArgument("invalid batch counts");
  if (positives == 0) return k_max;
  const std::size_t k = (k0 * batch_size + positives - 1) / positives;
  return std::clamp(k, k0, k_max);
}

std::vector<std::size_t> select_top_k(std::span<const double> scores,
                                      std::span<const std::string> ids, std::size_t k,
                                      std::span<const char> excluded) {
  if (k < 1) throw InvalidArgument("K must be at least 1");
  std::vector<std::size_t> cand;
  cand.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!excluded[i]) cand.push_back(i);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  };
  const std::size_t take = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(), better);
  cand.resize(take);
  return cand;
}

RunLog run_lp(const Corpus& pool, const Corpus& synthetic, const std::vector<std::string>& seed_ids,
              const LpRunConfig& cfg, Oracle& oracle, const GraphOptions& graph) {
  std::vector<std::size_t> rows;
  rows.reserve(seed_ids.size());
  for (const auto& id : seed_ids) rows.push_back(synthetic.position(id));
  return run_lp(pool, subset(synthetic, rows), cfg, oracle, graph);
}

RunLog run_lp(const Corpus& pool, const Corpus& seeds, const LpRunConfig& cfg, Oracle& oracle,
              const GraphOptions& graph) {
  check_pool_and_seeds(pool, seeds);
  if (cfg.k0 < 1) throw InvalidArgument("K0 must be at least 1");
  if (cfg.effective_k_max() < cfg.k0) throw InvalidArgument("K_max must be at least K0");
  if (cfg.t_prop < 1) throw InvalidArgument("T_prop must be at least 1");

  RunLog log;
  log.strategy = "lp";
  const std::size_t n_pool = pool.size();
  const Corpus all = concat(pool, seeds);

  std::optional<LshIndex> index;
  if (use_lsh(graph.lsh, all.size())) index = build_lsh_index(all, graph.lsh_params);
  const SimilarityGraph g =
      build_similarity_graph(all, cfg.tau, cfg.knn_cap, index ? &*index : nullptr, graph.exec);

  LpState state;
  state.w = row_normalize(g);
  state.y0.assign(all.size(), 0.0);
  state.clamped.assign(all.size(), 0);
  for (std::size_t s = n_pool; s < all.size(); ++s) state.clamp(s, Label::positive);

  // Reachability from the seeds, for the disconnected-component warning.
  {
    std::vector<char> seen(all.size(), 0);
    std::deque<std::size_t> frontier;
    std::size_t isolated_seeds = 0;
    for (std::size_t s = n_pool; s < all.size(); ++s) {
      seen[s] = 1;
      frontier.push_back(s);
      isolated_seeds += state.w.isolated(s);
    }
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop_front();
      for (const auto& nb : g.adjacency[u]) {
        if (!seen[nb.position]) {
          seen[nb.position] = 1;
          frontier.push_back(nb.position);
        }
      }
    }
    const auto reached = static_cast<std::size_t>(std::count(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(n_pool), 1));
    if (isolated_seeds == seeds.size()) {
      log.warnings.push_back("every seed is isolated at tau; batches fall back to score-0 tie-break order");
    } else if (isolated_seeds > 0) {
      log.warnings.push_back(std::to_string(isolated_seeds) + " seed(s) have no neighbors above tau");
    }
    if (reached < n_pool) {
      log.warnings.push_back(std::to_string(n_pool - reached) +
                             " pool item(s) are unreachable from the seeds and keep score 0");
    }
  }

  std::vector<char> excluded(all.size(), 0);
  for (std::size_t s = n_pool; s < all.size(); ++s) excluded[s] = 1;
  std::vector<std::string> ids;
  ids.reserve(all.size());
  for (const auto& r : all.records()) ids.push_back(r.id);

  std::size_t k = cfg.k0;
  std::size_t labeled = 0;
  for (std::size_t round = 1; round <= cfg.rounds && labeled < n_pool; ++round) {
    PropagationResult prop = propagate(state.w, state.y0, state.clamped, cfg.t_prop, cfg.eps, graph.exec);
    state.y = std::move(prop.scores);
    const std::vector<std::size_t> batch = select_top_k(state.y, ids, k, excluded);

    const LabelBatch request = make_batch(all, batch, round, "lp-" + std::to_string(round));
    Labels answer;
    try {
      answer = oracle.label(request);
      check_answer(request, answer);
    } catch (const OracleError& e) {
      log.error = e.what();
      return log;
    }

    BatchRecord rec;
    rec.iteration = round;
    rec.requested = k;
    for (std::size_t p : batch) {
      const Label l = answer.at(ids[p]);
      rec.ids.push_back(ids[p]);
      rec.labels.push_back(l);
      state.clamp(p, l);
      excluded[p] = 1;
    }
    labeled += batch.size();
    rec.precision = static_cast<double>(rec.positives()) / static_cast<double>(rec.ids.size());
    k = adaptive_k(cfg.k0, rec.positives(), rec.ids.size(), cfg.effective_k_max());
    log.batches.push_back(std::move(rec));
    state.iteration = round;
  }
  return log;
}

}  // namespace seedgraph
