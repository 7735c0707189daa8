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

#include "seedgraph/ibg.hpp"

#include <algorithm>
#include <optional>

#include "seedgraph/error.hpp"

namespace seedgraph {

void check_pool_and_seeds(const Corpus& pool, const Corpus& seeds) {
  if (pool.empty()) throw InvalidArgument("empty pool");
  if (seeds.empty()) throw InvalidArgument("empty seed set");
  if (pool.dimension() != seeds.dimension()) {
    throw InvalidArgument("dimension mismatch: pool " + std::to_string(pool.dimension()) +
                          ", seeds " + std::to_string(seeds.dimension()));
  }
  for (const auto& r : seeds.records()) {
    if (pool.contains(r.id)) throw InvalidArgument("seed id \"" + r.id + "\" also appears in the pool");
  }
}

RunLog run_ibg(const Corpus& pool, const Corpus& synthetic, const std::vector<std::string>& seed_ids,
               const IbgConfig& cfg, Oracle& oracle, const GraphOptions& graph) {
  std::vector<std::size_t> rows;
  rows.reserve(seed_ids.size());
  for (const auto& id : seed_ids) rows.push_back(synthetic.position(id));
  return run_ibg(pool, subset(synthetic, rows), cfg, oracle, graph);
}

RunLog run_ibg(const Corpus& pool, const Corpus& seeds, const IbgConfig& cfg, Oracle& oracle,
               const GraphOptions& graph) {
  check_pool_and_seeds(pool, seeds);
  if (cfg.iterations < 1) throw InvalidArgument("IBG needs at least one iteration");

  RunLog log;
  log.strategy = "ibg";
  Corpus known = seeds;  // V_P
  std::vector<std::size_t> remaining(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) remaining[i] = i;

  std::optional<LshIndex> index;
  if (use_lsh(graph.lsh, pool.size())) index = build_lsh_index(pool, graph.lsh_params);

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    if (remaining.empty()) break;
    const BipartiteGraph g = build_bipartite(known, pool, remaining, cfg.tau, cfg.d_max,
                                             index ? &*index : nullptr, graph.exec);
    std::vector<std::size_t> batch = g.connected_right();
    if (batch.empty()) {
      if (cfg.stop_on_empty_batch) break;
      continue;
    }
    std::sort(batch.begin(), batch.end(),
              [&](std::size_t a, std::size_t b) { return pool.id(a) < pool.id(b); });

    const LabelBatch request = make_batch(pool, batch, t, "ibg-" + std::to_string(t));
    Labels answer;
    try {
      answer = oracle.label(request);
      check_answer(request, answer);
    } catch (const OracleError& e) {
      log.error = e.what();
      return log;
    }

    BatchRecord rec;
    rec.iteration = t;
    rec.requested = batch.size();
    for (std::size_t p : batch) {
      const Label l = answer.at(pool.id(p));
      rec.ids.push_back(pool.id(p));
      rec.labels.push_back(l);
      if (l == Label::positive) known.append(pool.record(p), pool.embedding(p));
    }
    rec.precision = static_cast<double>(rec.positives()) / static_cast<double>(rec.ids.size());
    log.batches.push_back(std::move(rec));

    std::vector<std::size_t> next;
    next.reserve(remaining.size());
    std::sort(batch.begin(), batch.end());
    std::set_difference(remaining.begin(), remaining.end(), batch.begin(), batch.end(),
                        std::back_inserter(next));
    remaining = std::move(next);
  }
  return log;
}

}  // namespace seedgraph
