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

#include "seedgraph/baseline_lr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seedgraph/error.hpp"
#include "seedgraph/ibg.hpp"
#include "seedgraph/labelprop.hpp"

namespace seedgraph {

namespace {

double affine(std::span<const double> w, std::span<const float> x) {
  double z = w.back();
  for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * static_cast<double>(x[j]);
  return z;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_training_input(const Features& x, std::span<const int> labels) {
  if (x.dim == 0 || x.data.size() % x.dim != 0) throw InvalidArgument("bad feature matrix shape");
  if (labels.size() != x.rows()) throw InvalidArgument("label count does not match rows");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    (y ? pos : neg) = true;
  }
  if (!pos || !neg) throw InvalidArgument("training needs at least one example of each class");
}

}  // namespace

double logistic_loss(std::span<const double> w, const Features& x, std::span<const int> labels,
                     double l2) {
  const std::size_t n = x.rows();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = affine(w, x.row(i));
    sum += softplus(z) - labels[i] * z;
  }
  double reg = 0.0;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) reg += w[j] * w[j];
  return sum / static_cast<double>(n) + 0.5 * l2 * reg;
}

std::vector<double> logistic_gradient(std::span<const double> w, const Features& x,
                                      std::span<const int> labels, double l2) {
  const std::size_t n = x.rows();
  std::vector<double> g(w.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    const double err = sigmoid(affine(w, row)) - labels[i];
    for (std::size_t j = 0; j < row.size(); ++j) g[j] += err * static_cast<double>(row[j]);
    g.back() += err;
  }
  for (auto& v : g) v /= static_cast<double>(n);
  for (std::size_t j = 0; j + 1 < w.size(); ++j) g[j] += l2 * w[j];
  return g;
}

LrModel train_logistic(const Features& x, std::span<const int> labels, const LrHyper& hyper,
                       const LrModel* init) {
  check_training_input(x, labels);
  LrModel model;
  model.hyper = hyper;
  if (init && init->dimension() == x.dim) {
    model.weights = init->weights;
  } else {
    model.weights.assign(x.dim + 1, 0.0);
  }
  model.loss_history.reserve(hyper.epochs);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    model.loss_history.push_back(logistic_loss(model.weights, x, labels, hyper.l2));
    const auto g = logistic_gradient(model.weights, x, labels, hyper.l2);
    for (std::size_t j = 0; j < g.size(); ++j) model.weights[j] -= hyper.learning_rate * g[j];
  }
  for (double v : model.weights) {
    if (!std::isfinite(v)) throw Error("logistic regression diverged");
  }
  return model;
}

double predict_proba(const LrModel& model, std::span<const float> x) {
  if (x.size() != model.dimension()) throw InvalidArgument("dimension mismatch in predict_proba");
  return sigmoid(affine(model.weights, x));
}

std::vector<double> predict_proba(const LrModel& model, const Features& x, Exec exec) {
  if (x.dim != model.dimension()) throw InvalidArgument("dimension mismatch in predict_proba");
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
  std::vector<double> out(x.rows());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sigmoid(affine(model.weights, x.row(i)));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sigmoid(affine(model.weights, x.row(i)));
  }
  return out;
}

RunLog run_lr_baseline(const Corpus& pool, const Corpus& synthetic,
                       const std::vector<std::string>& seed_ids, const LrBaselineConfig& cfg,
                       Oracle& oracle, const LrHyper& hyper) {
  std::vector<std::size_t> rows;
  for (const auto& id : seed_ids) rows.push_back(synthetic.position(id));
  return run_lr_baseline(pool, subset(synthetic, rows), cfg, oracle, hyper);
}

RunLog run_lr_baseline(const Corpus& pool, const Corpus& seeds, const LrBaselineConfig& cfg,
                       Oracle& oracle, const LrHyper& hyper) {
  check_pool_and_seeds(pool, seeds);
  if (cfg.budget && *cfg.budget < cfg.k0) throw InvalidArgument("budget B must be at least K0");
  if (cfg.n_init_negatives < 1) throw InvalidArgument("the LR baseline needs at least one known negative");
  if (!pool.all_labeled()) {
    throw InvalidArgument("the LR baseline samples its initial negatives from truth labels");
  }

  RunLog log;
  log.strategy = "lr";
  std::mt19937_64 rng(cfg.rng_seed);
  const std::size_t dim = pool.dimension();

  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.record(i).truth == Label::negative) negatives.push_back(i);
  }
  if (negatives.size() < cfg.n_init_negatives) throw InvalidArgument("not enough negatives in the pool");
  std::vector<std::size_t> known_neg;
  std::sample(negatives.begin(), negatives.end(), std::back_inserter(known_neg), cfg.n_init_negatives, rng);

  std::vector<char> unavailable(pool.size(), 0);
  std::vector<float> train_x;
  std::vector<int> train_y;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    auto e = seeds.embedding(s);
    train_x.insert(train_x.end(), e.begin(), e.end());
    train_y.push_back(1);
  }
  for (std::size_t p : known_neg) {
    auto e = pool.embedding(p);
    train_x.insert(train_x.end(), e.begin(), e.end());
    train_y.push_back(0);
    unavailable[p] = 1;
    log.initial_known.push_back(pool.id(p));
  }
  log.warnings.push_back("LR baseline starts with " + std::to_string(known_neg.size()) +
                         " known real negatives in addition to the seeds");

  LrModel model = train_logistic(Features{train_x, dim}, train_y, hyper);
  std::size_t k = cfg.k0;
  for (std::size_t round = 1; round <= cfg.rounds; ++round) {
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!unavailable[i]) remaining.push_back(i);
    }
    if (remaining.empty()) break;

    std::vector<std::size_t> sample;
    if (cfg.budget && *cfg.budget < remaining.size()) {
      std::sample(remaining.begin(), remaining.end(), std::back_inserter(sample), *cfg.budget, rng);
    } else {
      sample = std::move(remaining);
    }

    std::vector<float> sx;
    sx.reserve(sample.size() * dim);
    std::vector<std::string> sample_ids;
    for (std::size_t p : sample) {
      auto e = pool.embedding(p);
      sx.insert(sx.end(), e.begin(), e.end());
      sample_ids.push_back(pool.id(p));
    }
    const auto probs = predict_proba(model, Features{sx, dim});
    const std::vector<char> none(sample.size(), 0);
    const auto top = select_top_k(probs, sample_ids, k, none);
    std::vector<std::size_t> batch;
    for (std::size_t t : top) batch.push_back(sample[t]);

    const LabelBatch request = make_batch(pool, batch, round, "lr-" + std::to_string(round));
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
    rec.scored = sample.size();
    for (std::size_t p : batch) {
      const Label l = answer.at(pool.id(p));
      rec.ids.push_back(pool.id(p));
      rec.labels.push_back(l);
      unavailable[p] = 1;
      auto e = pool.embedding(p);
      train_x.insert(train_x.end(), e.begin(), e.end());
      train_y.push_back(l == Label::positive ? 1 : 0);
    }
    rec.precision = static_cast<double>(rec.positives()) / static_cast<double>(rec.ids.size());
    k = adaptive_k(cfg.k0, rec.positives(), rec.ids.size(), cfg.effective_k_max());
    log.batches.push_back(std::move(rec));

    model = train_logistic(Features{train_x, dim}, train_y, hyper, hyper.warm_start ? &model : nullptr);
  }
  return log;
}

}  // namespace seedgraph
