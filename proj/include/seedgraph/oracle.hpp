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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seedgraph/dataset.hpp"

namespace seedgraph {

using Labels = std::map<std::string, Label>;

enum class BatchStatus { pending, answered };

struct BatchItem {
  std::string id;
  std::optional<std::string> text;
};

struct LabelBatch {
  std::string batch_id;
  std::size_t iteration = 0;
  std::vector<BatchItem> items;
  std::string created_at;
  BatchStatus status = BatchStatus::pending;
};

/// Builds a pending batch over pool rows; item order follows `positions`.
LabelBatch make_batch(const Corpus& pool, const std::vector<std::size_t>& positions,
                      std::size_t iteration, std::string batch_id);

/// Labeling authority consulted by the expansion strategies.
class Oracle {
 public:
  virtual ~Oracle() = default;
  /// Returns a label for every item of `batch` and nothing else.
  virtual Labels label(const LabelBatch& batch) = 0;
  /// "truth", "noisy" or "human"; recorded in the ledger.
  virtual std::string source() const = 0;
};

Labels label_truth(const LabelBatch& batch, const Corpus& pool);
Labels label_noisy(const LabelBatch& batch, const Corpus& pool, double flip_prob,
                   std::uint64_t rng_seed);

class TruthOracle : public Oracle {
 public:
  explicit TruthOracle(const Corpus& pool) : pool_(pool) {}
  Labels label(const LabelBatch& batch) override { return label_truth(batch, pool_); }
  std::string source() const override { return "truth"; }

 private:
  const Corpus& pool_;
};

class NoisyOracle : public Oracle {
 public:
  NoisyOracle(const Corpus& pool, double flip_prob, std::uint64_t rng_seed);
  Labels label(const LabelBatch& batch) override {
    return label_noisy(batch, pool_, flip_prob_, seed_);
  }
  std::string source() const override { return "noisy"; }

 private:
  const Corpus& pool_;
  double flip_prob_;
  std::uint64_t seed_;
};

/// Result of a human label submission.
struct SubmitOk {};
struct SubmitUnknownBatch {};
struct SubmitPartial {
  std::vector<std::string> missing;
};
struct SubmitInvalid {
  std::string reason;  // ids outside the batch, or batch no longer pending
};
using SubmitResult = std::variant<SubmitOk, SubmitUnknownBatch, SubmitPartial, SubmitInvalid>;

/// Pending-batch queue between a strategy worker (single writer) and label
/// submitters. At most one batch is pending at a time.
class BatchQueue {
 public:
  /// Publishes `batch` (status forced to pending); returns its id.
  std::string enqueue(LabelBatch batch);
  std::optional<LabelBatch> pending() const;
  std::optional<LabelBatch> find(const std::string& batch_id) const;
  /// All-or-nothing: every item must be labeled and no foreign ids may appear.
  SubmitResult submit(const std::string& batch_id, const Labels& labels);
  /// Labels once the batch is answered.
  std::optional<Labels> poll(const std::string& batch_id) const;
  /// Blocks until answered or cancelled; throws OracleError on cancel.
  Labels wait(const std::string& batch_id);
  void cancel();
  bool cancelled() const { return cancelled_; }

 private:
  struct Entry {
    LabelBatch batch;
    std::optional<Labels> answer;
  };
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Entry> entries_;
  std::atomic<bool> cancelled_{false};
};

/// Enqueues each batch and blocks until a human answers it.
class HumanOracle : public Oracle {
 public:
  explicit HumanOracle(BatchQueue& queue) : queue_(queue) {}
  Labels label(const LabelBatch& batch) override;
  std::string source() const override { return "human"; }

 private:
  BatchQueue& queue_;
};

/// Checks that `labels` covers exactly the batch items.
void check_answer(const LabelBatch& batch, const Labels& labels);

std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now());

}  // namespace seedgraph
