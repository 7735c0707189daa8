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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/kernels.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"

namespace seedgraph {

struct LrHyper {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;  // bias is not regularized
  bool warm_start = false;
};

/// Row-major feature view.
struct Features {
  std::span<const float> data;
  std::size_t dim = 0;

  std::size_t rows() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const float> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

struct LrModel {
  std::vector<double> weights;  // dim coefficients followed by the bias
  LrHyper hyper;
  std::vector<double> loss_history;  // one value per epoch, before the update

  std::size_t dimension() const { return weights.empty() ? 0 : weights.size() - 1; }
};

/// Mean log-loss plus (l2 / 2) * ||w||^2 over the non-bias weights.
double logistic_loss(std::span<const double> weights, const Features& x,
                     std::span<const int> labels, double l2);
/// Analytic gradient of logistic_loss.
std::vector<double> logistic_gradient(std::span<const double> weights, const Features& x,
                                      std::span<const int> labels, double l2);

/// Full-batch gradient descent from zero weights (or `init` when warm-starting).
LrModel train_logistic(const Features& x, std::span<const int> labels, const LrHyper& hyper,
                       const LrModel* init = nullptr);

double predict_proba(const LrModel& model, std::span<const float> x);
std::vector<double> predict_proba(const LrModel& model, const Features& x,
                                  Exec exec = Exec::parallel);

struct LrBaselineConfig {
  std::optional<std::size_t> budget;  // B; unset scores the whole remaining pool
  std::size_t k0 = 100;
  std::optional<std::size_t> k_max;   // defaults to 10 * k0
  std::size_t rounds = 20;
  std::size_t n_init_negatives = 19;
  std::uint64_t rng_seed = 7;

  std::size_t effective_k_max() const { return k_max.value_or(10 * k0); }
};

/// Active-learning baseline: logistic regression trained on the seeds plus a
/// few known negatives; each round scores a uniform sample of at most B
/// unlabeled items, queries the top K, and retrains.
RunLog run_lr_baseline(const Corpus& pool, const Corpus& seeds, const LrBaselineConfig& cfg,
                       Oracle& oracle, const LrHyper& hyper = {});
RunLog run_lr_baseline(const Corpus& pool, const Corpus& synthetic,
                       const std::vector<std::string>& seed_ids, const LrBaselineConfig& cfg,
                       Oracle& oracle, const LrHyper& hyper = {});

}  // namespace seedgraph
