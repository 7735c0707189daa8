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

#include "seedgraph/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

#include "seedgraph/error.hpp"

namespace seedgraph {

namespace {

std::vector<double> row_norms(const Corpus& corpus) {
  std::vector<double> norms(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto e = corpus.embedding(i);
    norms[i] = std::sqrt(kernels::dot(e.data(), e.data(), e.size()));
    if (norms[i] == 0.0) throw InvalidArgument("zero-norm embedding for \"" + corpus.id(i) + "\"");
  }
  return norms;
}

// rank[pos] orders positions by id so tie-breaks compare integers.
std::vector<std::size_t> id_ranks(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return corpus.id(a) < corpus.id(b); });
  std::vector<std::size_t> rank(corpus.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

void sort_neighbors(std::vector<Neighbor>& nbrs, const std::vector<std::size_t>& rank) {
  std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return rank[a.position] < rank[b.position];
  });
}

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in [0, 1)");
}

// Neighbors of `query` among `candidates` (or all rows of `target` when
// `candidates` is null) with cosine > tau, restricted to rows where
// `allowed` is nonzero.
std::vector<Neighbor> threshold_neighbors(std::span<const float> query, double query_norm,
                                          const Corpus& target, const std::vector<double>& norms,
                                          const std::vector<char>& allowed,
                                          const std::vector<std::size_t>* candidates, double tau,
                                          std::vector<double>& scratch, bool ilp) {
  std::vector<Neighbor> out;
  const std::size_t dim = target.dimension();
  auto consider = [&](std::size_t j, double d) {
    if (!allowed[j]) return;
    const double sim = d / (query_norm * norms[j]);
    if (sim > tau) out.push_back({j, sim});
  };
  if (candidates) {
    for (std::size_t j : *candidates) {
      if (!allowed[j]) continue;
      consider(j, kernels::dot(query.data(), target.embedding(j).data(), dim));
    }
  } else {
    scratch.resize(target.size());
    if (ilp) {
      kernels::dot_rows_ilp(query, target.matrix(), dim, scratch);
    } else {
      kernels::serial::dot_rows(query, target.matrix(), dim, scratch);
    }
    for (std::size_t j = 0; j < target.size(); ++j) consider(j, scratch[j]);
  }
  return out;
}

}  // namespace

std::size_t BipartiteGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

std::vector<std::size_t> BipartiteGraph::connected_right() const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    for (const auto& nb : e) out.push_back(nb.position);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::string& BipartiteGraph::right_id(std::size_t position) const {
  auto it = std::lower_bound(right_rows.begin(), right_rows.end(), position);
  if (it == right_rows.end() || *it != position) throw InvalidArgument("position not in graph");
  return right_ids[static_cast<std::size_t>(it - right_rows.begin())];
}

std::size_t SimilarityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

BipartiteGraph build_bipartite(const Corpus& seeds, const Corpus& pool, double tau,
                               std::size_t d_max, const LshIndex* index, Exec exec) {
  std::vector<std::size_t> rows(pool.size());
  std::iota(rows.begin(), rows.end(), 0);
  return build_bipartite(seeds, pool, rows, tau, d_max, index, exec);
}

BipartiteGraph build_bipartite(const Corpus& seeds, const Corpus& pool,
                               std::span<const std::size_t> pool_rows, double tau,
                               std::size_t d_max, const LshIndex* index, Exec exec) {
  check_tau(tau);
  if (d_max < 1) throw InvalidArgument("d_max must be at least 1");
  if (seeds.empty()) throw InvalidArgument("empty seed set");
  if (!pool.empty() && seeds.dimension() != pool.dimension()) {
    throw InvalidArgument("dimension mismatch: seeds " + std::to_string(seeds.dimension()) +
                          ", pool " + std::to_string(pool.dimension()));
  }
  if (index && index->indexed_size() != pool.size()) {
    throw InvalidArgument("LSH index was built over a different pool");
  }

  BipartiteGraph g;
  g.tau = tau;
  g.d_max = d_max;
  g.left_ids.reserve(seeds.size());
  for (const auto& r : seeds.records()) g.left_ids.push_back(r.id);
  g.right_ids.reserve(pool_rows.size());
  std::vector<char> allowed(pool.size(), 0);
  if (!std::is_sorted(pool_rows.begin(), pool_rows.end())) {
    throw InvalidArgument("pool rows must be ascending");
  }
  g.right_rows.assign(pool_rows.begin(), pool_rows.end());
  for (std::size_t r : pool_rows) {
    allowed.at(r) = 1;
    g.right_ids.push_back(pool.id(r));
  }
  g.edges.resize(seeds.size());
  if (pool_rows.empty()) return g;

  const auto pool_norms = row_norms(pool);
  const auto seed_norms = row_norms(seeds);
  const auto rank = id_ranks(pool);

  auto build_left = [&](std::size_t i, std::vector<double>& scratch, bool ilp) {
    auto query = seeds.embedding(i);
    std::vector<std::size_t> cand;
    if (index) cand = index->candidates(query);
    auto nbrs = threshold_neighbors(query, seed_norms[i], pool, pool_norms, allowed,
                                    index ? &cand : nullptr, tau, scratch, ilp);
    sort_neighbors(nbrs, rank);
    if (nbrs.size() > d_max) nbrs.resize(d_max);
    g.edges[i] = std::move(nbrs);
  };

  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(dynamic, 4)
      for (std::ptrdiff_t i = 0; i < n; ++i) build_left(static_cast<std::size_t>(i), scratch, true);
    }
  } else {
    std::vector<double> scratch;
    for (std::ptrdiff_t i = 0; i < n; ++i) build_left(static_cast<std::size_t>(i), scratch, false);
  }
  return g;
}

SimilarityGraph build_similarity_graph(const Corpus& all, double tau,
                                       std::optional<std::size_t> knn_cap, const LshIndex* index,
                                       Exec exec) {
  check_tau(tau);
  if (knn_cap && *knn_cap < 1) throw InvalidArgument("knn_cap must be at least 1");
  if (index && index->indexed_size() != all.size()) {
    throw InvalidArgument("LSH index was built over a different corpus");
  }
  const std::size_t n = all.size();
  SimilarityGraph g;
  g.tau = tau;
  g.node_ids.reserve(n);
  for (const auto& r : all.records()) g.node_ids.push_back(r.id);
  g.adjacency.resize(n);
  if (n == 0) return g;

  const auto norms = row_norms(all);
  const auto rank = id_ranks(all);
  std::vector<std::vector<Neighbor>> kept(n);

  auto build_node = [&](std::size_t i, std::vector<double>& scratch, std::vector<char>& allowed,
                        bool ilp) {
    auto query = all.embedding(i);
    std::vector<std::size_t> cand;
    if (index) cand = index->candidates(query);
    allowed[i] = 0;
    auto nbrs = threshold_neighbors(query, norms[i], all, norms, allowed, index ? &cand : nullptr,
                                    tau, scratch, ilp);
    allowed[i] = 1;
    sort_neighbors(nbrs, rank);
    if (knn_cap && nbrs.size() > *knn_cap) nbrs.resize(*knn_cap);
    kept[i] = std::move(nbrs);
  };

  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> scratch;
      std::vector<char> allowed(n, 1);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        build_node(static_cast<std::size_t>(i), scratch, allowed, true);
      }
    }
  } else {
    std::vector<double> scratch;
    std::vector<char> allowed(n, 1);
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      build_node(static_cast<std::size_t>(i), scratch, allowed, false);
    }
  }

  // Union symmetrization, merged in node order.
  for (std::size_t i = 0; i < n; ++i) {
    for (const Neighbor& nb : kept[i]) {
      g.adjacency[i].push_back(nb);
      g.adjacency[nb.position].push_back({i, nb.similarity});
    }
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.position < b.position; });
    adj.erase(std::unique(adj.begin(), adj.end(),
                          [](const Neighbor& a, const Neighbor& b) { return a.position == b.position; }),
              adj.end());
    sort_neighbors(adj, rank);
  }
  return g;
}

NormalizedAdjacency row_normalize(const SimilarityGraph& graph) {
  NormalizedAdjacency out;
  const std::size_t n = graph.size();
  out.degree.resize(n);
  out.w.rows = n;
  out.w.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.degree[i] = graph.adjacency[i].size();
    out.w.offsets[i + 1] = out.w.offsets[i] + out.degree[i];
  }
  out.w.columns.reserve(out.w.offsets[n]);
  out.w.values.reserve(out.w.offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> cols;
    cols.reserve(graph.adjacency[i].size());
    for (const auto& nb : graph.adjacency[i]) cols.push_back(nb.position);
    std::sort(cols.begin(), cols.end());
    const double w = cols.empty() ? 0.0 : 1.0 / static_cast<double>(cols.size());
    for (std::size_t c : cols) {
      out.w.columns.push_back(static_cast<std::uint32_t>(c));
      out.w.values.push_back(w);
    }
  }
  return out;
}

// --- LSH ---------------------------------------------------------------------

std::uint64_t LshIndex::signature(std::size_t table, std::span<const float> x) const {
  if (x.size() != dimension_) throw InvalidArgument("dimension mismatch in LSH signature");
  const auto& planes = hyperplanes_.at(table);
  std::uint64_t sig = 0;
  for (std::size_t t = 0; t < params_.bits; ++t) {
    const double s = kernels::dot(planes.data() + t * dimension_, x.data(), dimension_);
    if (s > 0.0) sig |= (std::uint64_t{1} << t);
  }
  return sig;
}

std::vector<std::size_t> LshIndex::candidates(std::span<const float> x) const {
  std::vector<std::size_t> out;
  auto take = [&](const std::unordered_map<std::uint64_t, std::vector<std::size_t>>& map,
                  std::uint64_t key) {
    if (auto it = map.find(key); it != map.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  };
  for (std::size_t t = 0; t < params_.tables; ++t) {
    const std::uint64_t sig = signature(t, x);
    take(buckets_[t], sig);
    if (params_.probe_radius >= 1) {
      for (std::size_t b = 0; b < params_.bits; ++b) take(buckets_[t], sig ^ (std::uint64_t{1} << b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LshIndex build_lsh_index(const Corpus& corpus, const LshParams& params) {
  if (params.tables < 1) throw InvalidArgument("LSH needs at least one table");
  if (params.bits < 1 || params.bits > 64) throw InvalidArgument("LSH bits must lie in [1, 64]");
  if (params.probe_radius > 1) throw InvalidArgument("LSH probe radius must be 0 or 1");
  LshIndex idx;
  idx.params_ = params;
  idx.dimension_ = corpus.dimension();
  idx.indexed_ = corpus.size();
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  idx.hyperplanes_.resize(params.tables);
  for (auto& planes : idx.hyperplanes_) {
    planes.resize(params.bits * idx.dimension_);
    for (auto& v : planes) v = normal(rng);
  }
  idx.buckets_.resize(params.tables);
  for (std::size_t t = 0; t < params.tables; ++t) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      idx.buckets_[t][idx.signature(t, corpus.embedding(i))].push_back(i);
    }
  }
  return idx;
}

LshMode parse_lsh_mode(const std::string& text) {
  if (text == "auto") return LshMode::automatic;
  if (text == "on") return LshMode::on;
  if (text == "off") return LshMode::off;
  throw InvalidArgument("lsh mode must be auto, on or off");
}

std::string to_string(LshMode mode) {
  switch (mode) {
    case LshMode::automatic: return "auto";
    case LshMode::on: return "on";
    case LshMode::off: return "off";
  }
  return "auto";
}

bool use_lsh(LshMode mode, std::size_t pool_size) {
  return mode == LshMode::on || (mode == LshMode::automatic && pool_size > kExactPairwiseLimit);
}

void write_graph(std::ostream& out, const SimilarityGraph& graph) {
  for (std::size_t i = 0; i < graph.size(); ++i) {
    nlohmann::json nbrs = nlohmann::json::array();
    for (const auto& nb : graph.adjacency[i]) nbrs.push_back({graph.node_ids[nb.position], nb.similarity});
    out << nlohmann::json{{"id", graph.node_ids[i]}, {"nbrs", nbrs}}.dump() << '\n';
  }
}

void write_graph(std::ostream& out, const BipartiteGraph& graph) {
  for (std::size_t i = 0; i < graph.left_ids.size(); ++i) {
    nlohmann::json nbrs = nlohmann::json::array();
    for (const auto& nb : graph.edges[i]) nbrs.push_back({graph.right_id(nb.position), nb.similarity});
    out << nlohmann::json{{"id", graph.left_ids[i]}, {"nbrs", nbrs}}.dump() << '\n';
  }
}

}  // namespace seedgraph
