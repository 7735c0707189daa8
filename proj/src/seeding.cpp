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

#include "seedgraph/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seedgraph/error.hpp"

namespace seedgraph {

SeedMethod parse_seed_method(const std::string& text) {
  if (text == "random") return SeedMethod::random;
  if (text == "acs") return SeedMethod::acs;
  throw InvalidArgument("seed method must be random or acs");
}

std::string to_string(SeedMethod method) { return method == SeedMethod::acs ? "acs" : "random"; }

namespace {

void check_config(const Corpus& pool, const SeedConfig& cfg) {
  if (cfg.k < 1) throw InvalidArgument("k must be at least 1");
  if (cfg.k > pool.size()) {
    throw InvalidArgument("k = " + std::to_string(cfg.k) + " exceeds pool size " +
                          std::to_string(pool.size()));
  }
  if (!(cfg.c > 0.0 && cfg.c <= 1.0)) throw InvalidArgument("coverage c must lie in (0, 1]");
}

// Cosine similarity rows of the pool, cached when the square matrix is small.
class SimilarityRows {
 public:
  SimilarityRows(const Corpus& pool, Exec exec) : pool_(pool), exec_(exec) {
    norms_.resize(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto e = pool.embedding(i);
      norms_[i] = std::sqrt(kernels::dot(e.data(), e.data(), e.size()));
      if (norms_[i] == 0.0) throw InvalidArgument("zero-norm embedding for \"" + pool.id(i) + "\"");
    }
    const std::size_t n = pool.size();
    if (n <= kCacheLimit) {
      cache_.resize(n * n);
      const auto count = static_cast<std::ptrdiff_t>(n);
      auto fill = [&](std::size_t i, std::vector<double>& buf) {
        compute(i, buf);
        std::copy(buf.begin(), buf.end(), cache_.begin() + static_cast<std::ptrdiff_t>(i * n));
      };
      if (exec == Exec::parallel) {
#pragma omp parallel
        {
          std::vector<double> buf;
#pragma omp for schedule(dynamic, 8)
          for (std::ptrdiff_t i = 0; i < count; ++i) fill(static_cast<std::size_t>(i), buf);
        }
      } else {
        std::vector<double> buf;
        for (std::ptrdiff_t i = 0; i < count; ++i) fill(static_cast<std::size_t>(i), buf);
      }
    }
  }

  void row(std::size_t i, std::vector<double>& out) const {
    const std::size_t n = pool_.size();
    if (!cache_.empty()) {
      out.assign(cache_.begin() + static_cast<std::ptrdiff_t>(i * n),
                 cache_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    } else {
      compute(i, out);
    }
  }

 private:
  static constexpr std::size_t kCacheLimit = 4096;

  void compute(std::size_t i, std::vector<double>& out) const {
    out.resize(pool_.size());
    if (exec_ == Exec::parallel) {
      kernels::dot_rows_ilp(pool_.embedding(i), pool_.matrix(), pool_.dimension(), out);
    } else {
      kernels::serial::dot_rows(pool_.embedding(i), pool_.matrix(), pool_.dimension(), out);
    }
    for (std::size_t j = 0; j < out.size(); ++j) out[j] /= norms_[i] * norms_[j];
  }

  const Corpus& pool_;
  Exec exec_;
  std::vector<double> norms_;
  std::vector<double> cache_;
};

CoverResult greedy_cover_rows(const Corpus& pool, const SimilarityRows& sims,
                              const std::vector<std::size_t>& rank, double radius, std::size_t k,
                              double target_fraction, Exec exec) {
  const std::size_t n = pool.size();
  // Neighborhood lists at this radius; symmetric because cosine is.
  std::vector<std::vector<std::uint32_t>> nbhd(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  auto build = [&](std::size_t i, std::vector<double>& buf) {
    sims.row(i, buf);
    auto& list = nbhd[i];
    list.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || buf[j] >= radius) list.push_back(static_cast<std::uint32_t>(j));
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> buf;
#pragma omp for schedule(dynamic, 8)
      for (std::ptrdiff_t i = 0; i < count; ++i) build(static_cast<std::size_t>(i), buf);
    }
  } else {
    std::vector<double> buf;
    for (std::ptrdiff_t i = 0; i < count; ++i) build(static_cast<std::size_t>(i), buf);
  }

  std::vector<std::size_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = nbhd[i].size();
  std::vector<char> covered(n, 0), chosen(n, 0);
  const auto target = static_cast<std::size_t>(std::ceil(target_fraction * static_cast<double>(n) - 1e-9));

  CoverResult result;
  result.radius = radius;
  while (result.ids.size() < k && result.covered < target) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      if (best == n || gain[i] > gain[best] || (gain[i] == gain[best] && rank[i] < rank[best])) best = i;
    }
    if (best == n || gain[best] == 0) break;
    chosen[best] = 1;
    result.ids.push_back(pool.id(best));
    result.gains.push_back(gain[best]);
    for (std::uint32_t x : nbhd[best]) {
      if (covered[x]) continue;
      covered[x] = 1;
      ++result.covered;
      for (std::uint32_t s : nbhd[x]) --gain[s];
    }
  }
  return result;
}

std::vector<std::size_t> id_rank(const Corpus& pool) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pool.id(a) < pool.id(b); });
  std::vector<std::size_t> rank(pool.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace

std::vector<std::string> sample_random_seeds(const Corpus& pool, const SeedConfig& cfg) {
  check_config(pool, cfg);
  std::vector<std::size_t> pos(pool.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::mt19937_64 rng(cfg.rng_seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < cfg.k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pos.size() - 1);
    std::swap(pos[i], pos[pick(rng)]);
  }
  std::vector<std::string> ids;
  ids.reserve(cfg.k);
  for (std::size_t i = 0; i < cfg.k; ++i) ids.push_back(pool.id(pos[i]));
  return ids;
}

CoverResult greedy_cover(const Corpus& pool, double radius, std::size_t k, double target_fraction,
                         Exec exec) {
  SimilarityRows sims(pool, exec);
  return greedy_cover_rows(pool, sims, id_rank(pool), radius, k, target_fraction, exec);
}

CoverResult acs_select_detailed(const Corpus& pool, const SeedConfig& cfg, Exec exec) {
  check_config(pool, cfg);
  SimilarityRows sims(pool, exec);
  const auto rank = id_rank(pool);
  const std::size_t target =
      static_cast<std::size_t>(std::ceil(cfg.c * static_cast<double>(pool.size()) - 1e-9));
  auto run = [&](double r) { return greedy_cover_rows(pool, sims, rank, r, cfg.k, cfg.c, exec); };

  CoverResult at_hi = run(1.0);
  if (at_hi.covered >= target) return at_hi;
  CoverResult best = run(0.0);
  if (best.covered < target) {
    throw InfeasibleError("coverage " + std::to_string(best.coverage(pool.size())) +
                          " below c = " + std::to_string(cfg.c) + " at the minimum radius 0 with k = " +
                          std::to_string(cfg.k));
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kAcsRadiusTolerance) {
    const double mid = 0.5 * (lo + hi);
    CoverResult r = run(mid);
    if (r.covered >= target) {
      lo = mid;
      best = std::move(r);
    } else {
      hi = mid;
    }
  }
  return best;
}

std::vector<std::string> acs_select(const Corpus& pool, const SeedConfig& cfg) {
  return acs_select_detailed(pool, cfg).ids;
}

std::vector<std::string> select_seeds(const Corpus& pool, const SeedConfig& cfg) {
  return cfg.method == SeedMethod::acs ? acs_select(pool, cfg) : sample_random_seeds(pool, cfg);
}

}  // namespace seedgraph
