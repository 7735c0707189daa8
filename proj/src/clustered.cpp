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

#include "seedgraph/clustered.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "seedgraph/error.hpp"

namespace seedgraph {

namespace {

using Vec = std::vector<double>;

void unitize(Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
}

double dotv(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec gaussian(std::mt19937_64& rng, std::size_t dim, double sigma) {
  std::normal_distribution<double> nd(0.0, sigma);
  Vec v(dim);
  for (double& x : v) x = nd(rng);
  return v;
}

Vec random_unit(std::mt19937_64& rng, std::size_t dim) {
  Vec v = gaussian(rng, dim, 1.0);
  unitize(v);
  return v;
}

Vec around(std::mt19937_64& rng, const Vec& center, double sigma) {
  Vec v = gaussian(rng, center.size(), sigma);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += center[i];
  unitize(v);
  return v;
}

std::string make_id(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%05zu", prefix, i);
  return buf;
}

void push(Corpus& c, std::string id, const Vec& v, Label truth, Source source) {
  std::vector<float> f(v.begin(), v.end());
  Record r;
  r.id = std::move(id);
  r.truth = truth;
  r.source = source;
  c.append(std::move(r), f);
}

struct Centers {
  std::vector<Vec> positive, negative;
};

Centers make_centers(const ClusteredSpec& spec, std::mt19937_64& rng) {
  Centers c;
  const Vec axis = random_unit(rng, spec.dim);
  const double w = spec.positive_axis_weight;
  for (std::size_t i = 0; i < spec.positive_clusters; ++i) {
    Vec u = random_unit(rng, spec.dim);
    const double along = dotv(u, axis);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] -= along * axis[k];
    unitize(u);
    Vec v(spec.dim);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = w * axis[k] + std::sqrt(1.0 - w * w) * u[k];
    unitize(v);
    c.positive.push_back(std::move(v));
  }
  std::size_t tries = 0;
  while (c.negative.size() < spec.negative_clusters) {
    if (++tries > 1000000) throw InfeasibleError("cannot place negative centers under the cross-cosine cap");
    Vec v = random_unit(rng, spec.dim);
    bool ok = true;
    for (const auto& p : c.positive) ok = ok && dotv(v, p) <= spec.max_cross_cosine;
    if (ok) c.negative.push_back(std::move(v));
  }
  return c;
}

// Splits `total` into `parts` sizes that differ by at most one.
std::vector<std::size_t> even_split(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

}  // namespace

ClusteredData generate_clustered(const ClusteredSpec& spec) {
  if (spec.dim < 2 || spec.n_real == 0 || spec.positive_clusters == 0 || spec.negative_clusters == 0) {
    throw InvalidArgument("clustered corpus needs dim >= 2 and nonempty cluster sets");
  }
  if (spec.unrepresented_clusters >= spec.positive_clusters) {
    throw InvalidArgument("at least one positive cluster must be represented in the synthetic pool");
  }
  std::mt19937_64 rng(spec.seed);
  const Centers centers = make_centers(spec, rng);

  ClusteredData out;
  out.real = Corpus(spec.dim);
  out.synthetic = Corpus(spec.dim);
  const auto n_pos = static_cast<std::size_t>(std::llround(spec.positive_fraction * static_cast<double>(spec.n_real)));
  const auto pos_sizes = even_split(n_pos, spec.positive_clusters);
  const auto neg_sizes = even_split(spec.n_real - n_pos, spec.negative_clusters);

  // Points are drawn cluster by cluster, then ids are assigned after a
  // shuffle so file order carries no class information.
  struct Row {
    Vec v;
    Label y;
    std::size_t cluster;
  };
  std::vector<Row> rows;
  rows.reserve(spec.n_real);
  for (std::size_t c = 0; c < spec.positive_clusters; ++c) {
    for (std::size_t i = 0; i < pos_sizes[c]; ++i) rows.push_back({around(rng, centers.positive[c], spec.noise), Label::positive, c});
  }
  for (std::size_t c = 0; c < spec.negative_clusters; ++c) {
    for (std::size_t i = 0; i < neg_sizes[c]; ++i) {
      rows.push_back({around(rng, centers.negative[c], spec.noise), Label::negative, spec.positive_clusters + c});
    }
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    push(out.real, make_id('r', i), rows[i].v, rows[i].y, Source::real);
    out.real_cluster.push_back(rows[i].cluster);
  }
  for (std::size_t c = 0; c < spec.positive_clusters; ++c) out.positive_cluster_ids.push_back(c);

  // Synthetic pool.
  std::mt19937_64 srng(spec.synthetic_seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(spec.positive_clusters);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), srng);
  const std::size_t represented = spec.positive_clusters - spec.unrepresented_clusters;
  std::vector<double> weights(represented);
  for (std::size_t r = 0; r < represented; ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
  std::discrete_distribution<std::size_t> pick_pos(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> pick_neg(0, spec.negative_clusters - 1);

  std::vector<Vec> shifted(spec.positive_clusters);
  for (std::size_t c = 0; c < spec.positive_clusters; ++c) {
    Vec d = random_unit(srng, spec.dim);
    shifted[c] = centers.positive[c];
    for (std::size_t k = 0; k < spec.dim; ++k) shifted[c][k] += spec.synthetic_shift * d[k];
  }
  const auto n_off = static_cast<std::size_t>(std::llround(spec.off_target_fraction * static_cast<double>(spec.n_synthetic)));
  std::vector<Row> syn;
  for (std::size_t i = 0; i < spec.n_synthetic - n_off; ++i) {
    const std::size_t c = order[pick_pos(srng)];
    syn.push_back({around(srng, shifted[c], spec.synthetic_noise), Label::positive, c});
  }
  for (std::size_t i = 0; i < n_off; ++i) {
    const std::size_t c = pick_neg(srng);
    syn.push_back({around(srng, centers.negative[c], spec.off_target_noise), Label::negative, spec.positive_clusters + c});
  }
  std::shuffle(syn.begin(), syn.end(), srng);
  for (std::size_t i = 0; i < syn.size(); ++i) {
    push(out.synthetic, make_id('s', i), syn[i].v, syn[i].y, Source::synthetic);
    out.synthetic_cluster.push_back(syn[i].cluster);
  }
  return out;
}

double max_center_cross_cosine(const ClusteredSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const Centers c = make_centers(spec, rng);
  double worst = -1.0;
  for (const auto& p : c.positive) {
    for (const auto& n : c.negative) worst = std::max(worst, dotv(p, n));
  }
  return worst;
}

}  // namespace seedgraph
