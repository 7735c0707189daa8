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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/kernels.hpp"

namespace seedgraph {

struct Neighbor {
  std::size_t position;
  double similarity;
};

/// Known positives (left) connected to unlabeled candidates (right).
/// Edges of each left node are sorted by similarity descending, ties by
/// right id ascending, and hold only pairs with similarity > tau.
struct BipartiteGraph {
  std::vector<std::string> left_ids;
  std::vector<std::string> right_ids;         // ids of the right rows considered
  std::vector<std::size_t> right_rows;        // their positions in the right corpus, ascending
  std::vector<std::vector<Neighbor>> edges;   // Neighbor::position indexes the right corpus
  double tau = 0.0;
  std::size_t d_max = 0;

  std::size_t edge_count() const;
  /// Distinct right positions with at least one edge, ascending.
  std::vector<std::size_t> connected_right() const;
  /// Id of a right corpus position that appears in `right_rows`.
  const std::string& right_id(std::size_t position) const;
};

/// Undirected similarity graph; adjacency is symmetric with equal weights.
struct SimilarityGraph {
  std::vector<std::string> node_ids;
  std::vector<std::vector<Neighbor>> adjacency;
  double tau = 0.0;
  bool symmetric = true;

  std::size_t size() const noexcept { return node_ids.size(); }
  std::size_t edge_count() const;  // undirected edges
};

/// Row-normalized adjacency W with W_ij = 1/deg(i) for every edge.
struct NormalizedAdjacency {
  CsrMatrix w;
  std::vector<std::size_t> degree;

  std::size_t size() const noexcept { return degree.size(); }
  bool isolated(std::size_t i) const { return degree[i] == 0; }
};

struct LshParams {
  std::size_t tables = 16;
  std::size_t bits = 12;
  /// Also probe buckets whose signature differs in up to this many bits (0 or 1).
  std::size_t probe_radius = 1;
  std::uint64_t seed = 7;
};

/// Random-hyperplane (SimHash) index over a corpus.
class LshIndex {
 public:
  LshIndex() = default;

  std::size_t tables() const noexcept { return params_.tables; }
  std::size_t bits() const noexcept { return params_.bits; }
  const LshParams& params() const noexcept { return params_; }
  std::size_t indexed_size() const noexcept { return indexed_; }

  std::uint64_t signature(std::size_t table, std::span<const float> x) const;
  /// Bucket map of one table: signature -> ascending positions.
  const std::unordered_map<std::uint64_t, std::vector<std::size_t>>& buckets(std::size_t table) const {
    return buckets_[table];
  }
  /// Positions sharing a (probed) bucket with `x` in any table, ascending and unique.
  std::vector<std::size_t> candidates(std::span<const float> x) const;

  friend LshIndex build_lsh_index(const Corpus& corpus, const LshParams& params);

 private:
  LshParams params_;
  std::size_t dimension_ = 0;
  std::size_t indexed_ = 0;
  std::vector<std::vector<float>> hyperplanes_;  // per table, bits x dimension
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::size_t>>> buckets_;
};

LshIndex build_lsh_index(const Corpus& corpus, const LshParams& params);
inline LshIndex build_lsh_index(const Corpus& corpus, std::size_t tables, std::size_t bits,
                                std::uint64_t seed) {
  return build_lsh_index(corpus, LshParams{tables, bits, 1, seed});
}

enum class LshMode { automatic, on, off };
LshMode parse_lsh_mode(const std::string& text);
std::string to_string(LshMode mode);

/// Pools larger than this use the LSH index when the mode is automatic.
inline constexpr std::size_t kExactPairwiseLimit = 20000;
bool use_lsh(LshMode mode, std::size_t pool_size);

/// Graph-construction knobs shared by the strategies.
struct GraphOptions {
  LshMode lsh = LshMode::automatic;
  LshParams lsh_params{};
  Exec exec = Exec::parallel;
};

/// Threshold-and-cap bipartite graph between every seed and every pool row.
BipartiteGraph build_bipartite(const Corpus& seeds, const Corpus& pool, double tau,
                               std::size_t d_max, const LshIndex* index = nullptr,
                               Exec exec = Exec::parallel);

/// Same, restricted to `pool_rows` on the right. `pool_rows` must be ascending.
BipartiteGraph build_bipartite(const Corpus& seeds, const Corpus& pool,
                               std::span<const std::size_t> pool_rows, double tau,
                               std::size_t d_max, const LshIndex* index = nullptr,
                               Exec exec = Exec::parallel);

/// Threshold graph over all rows, optionally capped to each node's top
/// `knn_cap` neighbors and then symmetrized by union.
SimilarityGraph build_similarity_graph(const Corpus& all, double tau,
                                       std::optional<std::size_t> knn_cap = std::nullopt,
                                       const LshIndex* index = nullptr,
                                       Exec exec = Exec::parallel);

NormalizedAdjacency row_normalize(const SimilarityGraph& graph);

/// One JSON object per node: {"id": ..., "nbrs": [[id, sim], ...]}.
void write_graph(std::ostream& out, const SimilarityGraph& graph);
void write_graph(std::ostream& out, const BipartiteGraph& graph);

}  // namespace seedgraph
