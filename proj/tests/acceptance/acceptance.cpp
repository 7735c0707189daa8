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

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "seedgraph/baseline_lr.hpp"
#include "seedgraph/clustered.hpp"
#include "seedgraph/config.hpp"
#include "seedgraph/ibg.hpp"
#include "seedgraph/labelprop.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/metrics.hpp"
#include "seedgraph/runner.hpp"
#include "seedgraph/seeding.hpp"
#include "seedgraph/service.hpp"
#include "seedgraph/theory.hpp"
#include "support.hpp"

using namespace seedgraph;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

template <class... A>
std::string fmt(const char* f, A... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Cell {
  std::size_t d;
  double p, q1;
};

std::vector<Cell> grid() {
  std::vector<Cell> cells;
  for (std::size_t d : {6u, 10u})
    for (double p : {0.3, 0.7, 1.0})
      for (double q1 : {0.3, 0.5}) cells.push_back({d, p, q1});
  return cells;
}

// --- theory ------------------------------------------------------------------

void monte_carlo_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t ok = 0;
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (const Cell& c : grid()) {
    theory::TheoryParams t;
    t.d = c.d;
    t.p = c.p;
    t.q1 = c.q1;
    t.q2 = theory::q2_from_q1(c.q1);
    t.s_size = 50;
    const auto r = theory::monte_carlo(t, 2000, 1000, seed++);
    const double zp = std::abs(r.mean_precision - r.closed_precision) / r.se_precision;
    const double zr = std::abs(r.mean_recall - r.closed_recall) / r.se_recall;
    worst = std::max({worst, zp, zr});
    ok += r.precision_within(3.0) && r.recall_within(3.0);
    std::printf("      d=%zu p=%.1f q1=%.1f h=%.3f p_real=%.3f  P: %.5f vs %.5f (z=%.2f)  R: %.5f vs %.5f (z=%.2f)\n", c.d,
                c.p, c.q1, r.measured_h, r.realized_p, r.mean_precision, r.closed_precision, zp, r.mean_recall,
                r.closed_recall, zr);
  }
  const double secs = seconds_since(t0);
  verdict(ok == 12 && secs < 120, "theory Monte Carlo (12 cells, n=2000, |S|=50, 1000 trials, 3 SE)",
          fmt("%zu/12 cells within 3 SE on both metrics, worst |z| = %.2f, %.1fs", ok, worst, secs));
}

void threshold_sign() {
  // Finite differences in h over the feasible range, for the 12 grid cells
  // and for a p sweep that straddles each threshold.
  std::size_t checked = 0, violations = 0, in_band = 0;
  auto probe = [&](theory::TheoryParams t) {
    const double pstar = theory::precision_threshold(t.q1, t.q2, t.d);
    const double d = static_cast<double>(t.d);
    for (int k = 0; k < 40; ++k) {
      const double lo_h = (d + 2.0) / 2.0;
      t.h = lo_h + (d + 1.0 - lo_h) * (k + 0.5) / 40.0;
      theory::TheoryParams a = t, b = t;
      a.h -= 1e-4;
      b.h += 1e-4;
      const double diff = theory::expected_precision(b) - theory::expected_precision(a);
      if (std::abs(t.p - pstar) <= 0.02) {
        ++in_band;
        continue;
      }
      ++checked;
      const bool decreasing_expected = t.p > pstar;
      if (decreasing_expected != (diff < 0)) ++violations;
    }
  };
  for (const Cell& c : grid()) {
    theory::TheoryParams t;
    t.d = c.d;
    t.p = c.p;
    t.q1 = c.q1;
    t.q2 = theory::q2_from_q1(c.q1);
    probe(t);
    for (int i = 1; i <= 100; ++i) {
      t.p = i / 100.0;
      probe(t);
    }
  }
  verdict(violations == 0 && checked > 0, "threshold sign (dead band 0.02 around p*)",
          fmt("%zu finite differences checked, %zu violations, %zu skipped in the band", checked, violations, in_band));
}

void identities() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t count_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    theory::TheoryParams t;
    t.d = 2 + rng() % 40;
    t.q1 = 0.01 + 0.48 * u(rng);
    t.q2 = t.q1 * (1.0 + 1e-3 + (1.0 - 2e-3) * u(rng));
    t.p = 1e-3 + (1.0 - 1e-3) * u(rng);
    const long long sp = 1 + static_cast<long long>(rng() % 100);
    const long long lo = (sp * static_cast<long long>(t.d + 2) + 1) / 2;
    const long long hi = sp * static_cast<long long>(t.d + 1);
    const long long nb = lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    t.h = static_cast<double>(nb) / static_cast<double>(sp);
    worst = std::max(worst, std::abs(theory::expected_precision(t) - theory::expected_precision_unsimplified(t)));
    const auto [s1, s2] = theory::s1_s2_counts_exact(nb, t.d, sp);
    if (sp + s1 + s2 != nb) ++count_fail;
  }
  verdict(worst <= 1e-10 && count_fail == 0, "algebraic identities (1000 draws)",
          fmt("max |simplified - unsimplified| = %.3g, counting identity failures = %zu", worst, count_fail));
}

// --- clustered benchmark -------------------------------------------------------

struct PrPoint {
  double recall, precision;
};

std::vector<PrPoint> single_shot_sweep(const Corpus& real, const Corpus& synthetic, std::vector<std::string> ids) {
  std::vector<std::size_t> rows;
  for (const auto& id : ids) rows.push_back(synthetic.position(id));
  std::sort(rows.begin(), rows.end());
  const Corpus seeds = subset(synthetic, rows);
  const BipartiteGraph g = build_bipartite(seeds, real, 0.8, 1024);
  const double total = static_cast<double>(real.count_positive());
  std::vector<PrPoint> out;
  for (std::size_t cap = 1; cap <= 1024; cap *= 2) {
    std::set<std::size_t> queried;
    for (const auto& e : g.edges)
      for (std::size_t k = 0; k < std::min(cap, e.size()); ++k) queried.insert(e[k].position);
    std::size_t tp = 0;
    for (auto q : queried) tp += *real.record(q).truth == Label::positive;
    out.push_back({static_cast<double>(tp) / total,
                   queried.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(queried.size())});
  }
  return out;
}

double precision_at_recall(const std::vector<PrPoint>& c, double r) {
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (r <= c[i].recall) {
      if (c[i].recall == c[i - 1].recall) return c[i].precision;
      return c[i - 1].precision +
             (c[i].precision - c[i - 1].precision) * (r - c[i - 1].recall) / (c[i].recall - c[i - 1].recall);
    }
  }
  return c.back().precision;
}

void clustered_benchmark() {
  const auto t0 = std::chrono::steady_clock::now();
  const ClusteredSpec spec;
  const ClusteredData data = generate_clustered(spec);
  const double cross = max_center_cross_cosine(spec);
  SeedConfig sc;  // 100 uniformly drawn synthetic seeds
  const auto seeds = sample_random_seeds(data.synthetic, sc);
  TruthOracle oracle(data.real);

  LpRunConfig lc;
  lc.tau = 0.5;
  lc.knn_cap = 15;
  const auto lp = evaluate(run_lp(data.real, data.synthetic, seeds, lc, oracle), data.real);
  IbgConfig ic;
  const auto ibg = evaluate(run_ibg(data.real, data.synthetic, seeds, ic, oracle), data.real);
  const double base = static_cast<double>(data.real.count_positive()) / static_cast<double>(data.real.size());
  const std::vector<double> at{0.10};
  const double random_recall = random_baseline_curve(base, data.real.size(), at)[0].recall_cum;
  const double lp_recall = recall_at(lp, 0.10);
  verdict(lp_recall >= 2.0 * random_recall && cross <= 0.3,
          "clustered (a) LP recall at query ratio 0.10 vs random",
          fmt("LP %.4f vs 2 x random %.4f (10000 x 64, base rate %.2f, center cross-cosine %.3f)", lp_recall,
              2 * random_recall, base, cross));

  std::vector<double> ratios;
  for (int i = 0; i <= 95; ++i) ratios.push_back(0.05 + 0.01 * i);
  for (const auto& p : lp)
    if (p.query_ratio >= 0.05) ratios.push_back(p.query_ratio);
  for (const auto& p : ibg)
    if (p.query_ratio >= 0.05) ratios.push_back(p.query_ratio);
  std::size_t bad = 0;
  double min_gap = 1.0;
  std::string where;
  for (double r : ratios) {
    const double gap = recall_at(lp, r) - recall_at(ibg, r);
    min_gap = std::min(min_gap, gap);
    if (gap < 0) {
      ++bad;
      where += fmt(" %.4f", r);
    }
  }
  verdict(bad == 0, "clustered (b) LP recall >= IBG recall at every query ratio >= 0.05",
          fmt("%zu ratios checked, %zu violations%s, smallest margin %.4f; LP reaches ratio %.3f, IBG %.3f",
              ratios.size(), bad, where.c_str(), min_gap, lp.empty() ? 0.0 : lp.back().query_ratio, ibg.empty() ? 0.0 : ibg.back().query_ratio));

  std::size_t wins = 0;
  std::string detail;
  for (std::uint64_t t = 0; t < 10; ++t) {
    ClusteredSpec s = spec;
    s.synthetic_seed = 100 + t;
    const ClusteredData d = generate_clustered(s);
    SeedConfig cfg;
    cfg.rng_seed = 100 + t;
    const auto rnd = single_shot_sweep(d.real, d.synthetic, sample_random_seeds(d.synthetic, cfg));
    cfg.method = SeedMethod::acs;
    const auto acs = single_shot_sweep(d.real, d.synthetic, acs_select(d.synthetic, cfg));
    const double lo = std::max(acs.front().recall, rnd.front().recall);
    const double hi = std::min(acs.back().recall, rnd.back().recall);
    double pa = 0, pr = 0;
    if (lo <= hi) {
      for (int k = 0; k <= 50; ++k) {
        const double x = lo + (hi - lo) * k / 50.0;
        pa += precision_at_recall(acs, x) / 51.0;
        pr += precision_at_recall(rnd, x) / 51.0;
      }
      wins += pa >= pr;
    }
    detail += fmt(" %.3f/%.3f", pa, pr);
  }
  verdict(wins >= 8, "clustered (c) ACS precision >= random precision at matched recall",
          fmt("%zu/10 trials (acs/random mean precision:%s), total %.1fs", wins, detail.c_str(), seconds_since(t0)));
}

// --- LP mechanics --------------------------------------------------------------

void lp_mechanics() {
  std::mt19937_64 rng(99);
  std::size_t clamp_bad = 0, steps_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 4 + rng() % 60;
    const auto g = oracles::random_graph(n, rng() % (3 * n), rng);
    const auto w = row_normalize(g);
    std::vector<double> y0(n, 0.0);
    std::vector<char> clamped(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 3 == 0) {
        clamped[i] = 1;
        y0[i] = rng() % 2 ? 1.0 : -1.0;
      }
    }
    propagate(w, y0, clamped, 25, 0.0, trial % 2 ? Exec::parallel : Exec::serial,
              [&](std::size_t, std::span<const double> y) {
                ++steps_checked;
                for (std::size_t i = 0; i < n; ++i) {
                  if ((clamped[i] && y[i] != y0[i]) || y[i] < -1.0 || y[i] > 1.0) {
                    ++clamp_bad;
                    return;
                  }
                }
              });
  }
  verdict(clamp_bad == 0, "LP clamp invariant (1000 random graphs)",
          fmt("%zu propagation steps inspected, %zu violations", steps_checked, clamp_bad));

  // Connected fixtures: dense random graphs with every third node clamped. The
  // error contracts by the spectral radius of the free block of W, estimated
  // here by power iteration and reported alongside.
  std::size_t converged = 0, worst_steps = 0;
  double worst_rho = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + rng() % 40;
    const auto g = oracles::random_graph(n, n * n / 6, rng);
    const auto w = row_normalize(g);
    std::vector<double> y0(n, 0.0);
    std::vector<char> clamped(n, 0);
    for (std::size_t i = 0; i < n; i += 3) {
      clamped[i] = 1;
      y0[i] = (i / 3) % 2 ? -1.0 : 1.0;
    }
    std::vector<double> v(n, 1.0), nv(n);
    double rho = 0.0;
    for (int it = 0; it < 300; ++it) {
      for (std::size_t i = 0; i < n; ++i) v[i] = clamped[i] ? 0.0 : v[i];
      kernels::spmv(w.w, v, nv, Exec::serial);
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, clamped[i] ? 0.0 : std::abs(nv[i]));
      rho = norm;
      for (std::size_t i = 0; i < n; ++i) v[i] = nv[i] / norm;
    }
    worst_rho = std::max(worst_rho, rho);
    const auto r = propagate(w, y0, clamped, 50, 1e-6);
    converged += r.converged && r.last_delta < 1e-6;
    worst_steps = std::max(worst_steps, r.steps);
  }
  verdict(converged == 200, "LP convergence within 50 steps (max |dY| < 1e-6)",
          fmt("%zu/200 connected fixtures converged, slowest took %zu steps, largest free-block spectral radius %.3f",
              converged, worst_steps, worst_rho));

  std::size_t cases = 0, wrong = 0;
  for (std::size_t k0 = 1; k0 <= 20; ++k0) {
    for (std::size_t kmax = k0; kmax <= 200; kmax += 9) {
      for (std::size_t b = 1; b <= 25; ++b) {
        for (std::size_t pos = 0; pos <= b; ++pos) {
          ++cases;
          std::size_t expect;
          if (pos * kmax <= k0 * b) {
            expect = kmax;
          } else {
            expect = std::clamp((k0 * b + pos - 1) / pos, k0, kmax);
          }
          const double p = static_cast<double>(pos) / static_cast<double>(b);
          wrong += adaptive_k(k0, pos, b, kmax) != expect || adaptive_k(k0, p, kmax) != expect;
        }
      }
    }
  }
  verdict(wrong == 0, "adaptive_k = ceil(K0 / p_prev) clipped to [K0, K_max]",
          fmt("%zu grid cases, %zu mismatches", cases, wrong));
}

// --- IBG mechanics -------------------------------------------------------------

void ibg_mechanics() {
  std::size_t graphs = 0, edge_bad = 0, run_bad = 0;
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    const Corpus pool = testing::random_unit_corpus(150, 4, 300 + trial, "p");
    const Corpus seeds = testing::random_unit_corpus(5, 4, 600 + trial, "s", Source::synthetic);
    const double tau = 0.5 + 0.006 * static_cast<double>(trial);
    const std::size_t d_max = 1 + trial % 9;
    const BipartiteGraph g = build_bipartite(seeds, pool, tau, d_max, nullptr, trial % 2 ? Exec::parallel : Exec::serial);
    ++graphs;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      // Brute force: every pool row above tau, best first, ties by id.
      std::vector<std::pair<double, std::string>> all;
      for (std::size_t j = 0; j < pool.size(); ++j) {
        const double sim = cosine(seeds.embedding(s), pool.embedding(j));
        if (sim > tau) all.push_back({-sim, pool.id(j)});
      }
      std::sort(all.begin(), all.end());
      const auto& e = g.edges[s];
      if (e.size() != std::min(d_max, all.size())) ++edge_bad;
      for (std::size_t k = 0; k < e.size() && k < all.size(); ++k) {
        if (e[k].similarity <= tau || pool.id(e[k].position) != all[k].second) ++edge_bad;
      }
    }
  }

  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Corpus raw = testing::random_unit_corpus(120, 3, 900 + trial, "p");
    Corpus pool(3);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Record r = raw.record(i);
      r.truth = raw.embedding(i)[0] > 0.2f ? Label::positive : Label::negative;
      pool.append(r, raw.embedding(i));
    }
    const Corpus seeds = testing::random_unit_corpus(3, 3, 77 + trial, "s", Source::synthetic);
    const auto expect = oracles::naive_ibg(pool, seeds, 0.88, 1 + trial % 5, 6);
    TruthOracle oracle(pool);
    const RunLog log = run_ibg(pool, seeds, IbgConfig{0.88, 1 + trial % 5, 6, true}, oracle);
    bool same = log.batches.size() == expect.size();
    for (std::size_t t = 0; same && t < expect.size(); ++t) same = log.batches[t].ids == expect[t];
    run_bad += !same;
  }
  verdict(edge_bad == 0 && run_bad == 0, "IBG degree cap and threshold soundness",
          fmt("%zu random bipartite graphs, %zu edge mismatches; 20 runs vs brute force, %zu differ", graphs, edge_bad,
              run_bad));

  using testing::angle;
  const Corpus seeds = testing::corpus({{"seed", angle(0)}}, Source::synthetic);
  const Corpus pool = testing::corpus({{"a", angle(10), Label::positive},
                                       {"b", angle(-10), Label::positive},
                                       {"c", angle(20), Label::negative},
                                       {"x", angle(30), Label::positive},
                                       {"y", angle(-30), Label::positive},
                                       {"z", angle(33), Label::positive}});
  TruthOracle oracle(pool);
  const RunLog log = run_ibg(pool, seeds, IbgConfig{0.9, 10, 2, true}, oracle);
  const bool exact = log.batches.size() == 2 && log.batches[0].ids == std::vector<std::string>{"a", "b", "c"} &&
                     log.batches[0].positives() == 2 &&
                     log.batches[1].ids == std::vector<std::string>{"x", "y", "z"} && log.batches[1].positives() == 3;
  verdict(exact, "IBG seven-node fixture", exact ? "iteration 1 = {a,b,c} (2 positive), iteration 2 = {x,y,z}"
                                                 : "batch sequence differs from the hand simulation");
}

// --- LR baseline -------------------------------------------------------------------

void lr_baseline() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 6, n = 4 + trial % 9;
    std::vector<float> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < n * dim; ++i) x.push_back(static_cast<float>(nd(rng)));
    for (std::size_t i = 0; i < n; ++i) y.push_back(static_cast<int>(rng() % 2));
    std::vector<double> w(dim + 1);
    for (auto& v : w) v = nd(rng);
    const Features f{x, dim};
    const double l2 = 1e-2 * (trial % 4);
    const auto g = logistic_gradient(w, f, y, l2);
    const auto fd =
        oracles::finite_difference([&](const std::vector<double>& v) { return logistic_loss(v, f, y, l2); }, w);
    for (std::size_t j = 0; j < g.size(); ++j) {
      worst = std::max(worst, std::abs(g[j] - fd[j]) / std::max(1e-3, std::abs(g[j]) + std::abs(fd[j])));
    }
  }
  verdict(worst < 1e-5, "LR analytic gradient vs central differences (100 instances)",
          fmt("max relative error %.3g", worst));

  std::vector<float> x;
  std::vector<int> y;
  std::uniform_real_distribution<double> u(-1, 1);
  while (y.size() < 80) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a - 0.5 * b) < 0.25) continue;
    x.push_back(static_cast<float>(a));
    x.push_back(static_cast<float>(b));
    y.push_back(a - 0.5 * b > 0 ? 1 : 0);
  }
  const LrModel m = train_logistic(Features{x, 2}, y, LrHyper{});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    correct += (predict_proba(m, std::span<const float>(x).subspan(2 * i, 2)) > 0.5) == (y[i] == 1);
  }
  verdict(correct == y.size(), "LR separable fixture", fmt("training accuracy %zu/%zu", correct, y.size()));

  const ClusteredData data = generate_clustered(ClusteredSpec{});
  SeedConfig sc;
  sc.k = 19;
  const auto seeds = sample_random_seeds(data.synthetic, sc);
  std::size_t rounds_checked = 0, bad = 0;
  std::string detail;
  for (std::size_t budget : {1000u, 4000u, 8000u, 16000u}) {
    LrBaselineConfig cfg;
    cfg.budget = budget;
    cfg.rounds = 3;
    TruthOracle oracle(data.real);
    const RunLog log = run_lr_baseline(data.real, data.synthetic, seeds, cfg, oracle, LrHyper{0.1, 200, 1e-4, false});
    std::size_t unavailable = log.initial_known.size();
    for (const auto& b : log.batches) {
      ++rounds_checked;
      const std::size_t expect_scored = std::min(budget, data.real.size() - unavailable);
      if (b.scored != expect_scored || b.ids.size() > b.requested || b.ids.size() != std::min(b.requested, b.scored))
        ++bad;
      unavailable += b.ids.size();
    }
    detail += fmt(" B=%zu:%zu", budget, log.batches.empty() ? 0 : log.batches.front().scored);
  }
  verdict(bad == 0 && rounds_checked == 12, "LR budget accounting for B in {1000, 4000, 8000, 16000}",
          fmt("%zu rounds, %zu accounting errors; first-round scored counts%s", rounds_checked, bad, detail.c_str()));
}

// --- determinism and ledger replay ----------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism_and_replay() {
  testing::TempDir dir;
  ClusteredSpec spec;
  spec.n_real = 3000;
  const ClusteredData data = generate_clustered(spec);
  save_corpus(dir.file("real.jsonl"), data.real);
  save_corpus(dir.file("synthetic.jsonl"), data.synthetic);

  std::size_t identical = 0, total = 0;
  for (const std::string strategy : {"ibg", "lp", "lr"}) {
    for (const std::string format : {"csv", "json"}) {
      nlohmann::json doc = {{"strategy", strategy},
                            {"data", {{"real", dir.file("real.jsonl")}, {"synthetic", dir.file("synthetic.jsonl")}}},
                            {"seeding", {{"method", strategy == "lp" ? "acs" : "random"}}},
                            {"loop", {{"rounds", 4}, {"T", 4}}},
                            {"lr", {{"budget", 1000}, {"epochs", 100}}}};
      const RunConfig cfg = validate_config(doc);
      std::string reports[2];
      for (int rep = 0; rep < 2; ++rep) {
        const RunInputs inputs = load_inputs(cfg);
        const std::string report = dir.file(strategy + std::to_string(rep) + "." + format);
        fs::remove(ledger_path_for(report));
        run_recorded(cfg, inputs, strategy, ledger_path_for(report), report, parse_report_format(format),
                     rep ? Exec::serial : Exec::parallel);
        reports[rep] = slurp(report);
      }
      ++total;
      identical += !reports[0].empty() && reports[0] == reports[1];
    }
  }
  verdict(identical == total, "determinism (byte-identical reports)",
          fmt("%zu/%zu strategy x format pairs identical across repeated runs (parallel vs serial kernels)", identical,
              total));

  std::size_t matched = 0, runs_checked = 0;
  {
    RunManager manager(dir.file("runs"));
    for (const std::string strategy : {"ibg", "lp", "lr"}) {
      nlohmann::json doc = {{"strategy", strategy},
                            {"data", {{"real", dir.file("real.jsonl")}, {"synthetic", dir.file("synthetic.jsonl")}}},
                            {"loop", {{"rounds", 4}, {"T", 4}}},
                            {"lr", {{"budget", 1000}, {"epochs", 100}}}};
      const std::string id = manager.create(doc);
      manager.wait_for(id, {RunState::done, RunState::failed}, std::chrono::minutes(5));
      ++runs_checked;
      const auto served = manager.metrics(id)["points"];
      const auto replayed =
          evaluate(runlog_from_ledger(read_ledger(manager.record(id).ledger_path), id), data.real);
      bool same = served.size() == replayed.size() && !replayed.empty();
      for (std::size_t i = 0; same && i < replayed.size(); ++i) same = to_json(replayed[i]) == served[i];
      const std::string report = slurp((fs::path(manager.root()) / id / "report.csv").string());
      same = same && report == report_string(replayed, ReportFormat::csv);
      matched += same;
    }
  }
  verdict(matched == runs_checked, "ledger replay equals served metrics",
          fmt("%zu/%zu runs: evaluate(ledger) == served points == report.csv", matched, runs_checked));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("acceptance: %d OpenMP thread(s)\n", kernels::thread_count());
  monte_carlo_grid();
  threshold_sign();
  identities();
  clustered_benchmark();
  lp_mechanics();
  ibg_mechanics();
  lr_baseline();
  determinism_and_replay();
  std::printf("acceptance: %d failure(s), %.1fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
