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

#include "seedgraph/oracle.hpp"

#include <algorithm>
#include <ctime>
#include <set>

#include "seedgraph/error.hpp"
#include "seedgraph/runlog.hpp"

namespace seedgraph {

std::size_t BatchRecord::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::positive));
}

std::size_t RunLog::labeled_count() const {
  std::size_t n = 0;
  for (const auto& b : batches) n += b.ids.size();
  return n;
}

std::size_t RunLog::positives_found() const {
  std::size_t n = 0;
  for (const auto& b : batches) n += b.positives();
  return n;
}

std::vector<std::string> RunLog::labeled_ids() const {
  std::vector<std::string> ids;
  for (const auto& b : batches) ids.insert(ids.end(), b.ids.begin(), b.ids.end());
  return ids;
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

LabelBatch make_batch(const Corpus& pool, const std::vector<std::size_t>& positions,
                      std::size_t iteration, std::string batch_id) {
  LabelBatch batch;
  batch.batch_id = std::move(batch_id);
  batch.iteration = iteration;
  batch.created_at = utc_timestamp();
  batch.items.reserve(positions.size());
  for (std::size_t p : positions) {
    const Record& r = pool.record(p);
    batch.items.push_back({r.id, r.text});
  }
  return batch;
}

void check_answer(const LabelBatch& batch, const Labels& labels) {
  if (labels.size() != batch.items.size()) {
    throw OracleError("oracle answered " + std::to_string(labels.size()) + " labels for a batch of " +
                      std::to_string(batch.items.size()));
  }
  for (const auto& item : batch.items) {
    if (!labels.contains(item.id)) throw OracleError("oracle gave no label for \"" + item.id + "\"");
  }
}

Labels label_truth(const LabelBatch& batch, const Corpus& pool) {
  Labels out;
  for (const auto& item : batch.items) {
    auto pos = pool.find(item.id);
    if (!pos) throw OracleError("\"" + item.id + "\" is not in the pool");
    const auto& truth = pool.record(*pos).truth;
    if (!truth) throw OracleError("no truth label for \"" + item.id + "\"");
    out.emplace(item.id, *truth);
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Labels label_noisy(const LabelBatch& batch, const Corpus& pool, double flip_prob,
                   std::uint64_t rng_seed) {
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw InvalidArgument("flip_prob must lie in [0, 0.5)");
  Labels out = label_truth(batch, pool);
  for (auto& [id, label] : out) {
    // One uniform draw per (seed, id) keeps repeated queries consistent.
    const double u = static_cast<double>(splitmix64(rng_seed ^ splitmix64(fnv1a(id))) >> 11) * 0x1.0p-53;
    if (u < flip_prob) label = label == Label::positive ? Label::negative : Label::positive;
  }
  return out;
}

NoisyOracle::NoisyOracle(const Corpus& pool, double flip_prob, std::uint64_t rng_seed)
    : pool_(pool), flip_prob_(flip_prob), seed_(rng_seed) {
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw InvalidArgument("flip_prob must lie in [0, 0.5)");
}

std::string BatchQueue::enqueue(LabelBatch batch) {
  std::lock_guard lock(mu_);
  std::set<std::string> seen;
  for (const auto& item : batch.items) {
    if (!seen.insert(item.id).second) throw InvalidArgument("duplicate item \"" + item.id + "\" in batch");
  }
  for (const auto& e : entries_) {
    if (e.batch.batch_id == batch.batch_id) throw InvalidArgument("batch id reused: " + batch.batch_id);
    if (!e.answer) throw InvalidArgument("a batch is already pending");
  }
  batch.status = BatchStatus::pending;
  std::string id = batch.batch_id;
  entries_.push_back({std::move(batch), std::nullopt});
  return id;
}

std::optional<LabelBatch> BatchQueue::pending() const {
  std::lock_guard lock(mu_);
  for (const auto& e : entries_) {
    if (!e.answer) return e.batch;
  }
  return std::nullopt;
}

std::optional<LabelBatch> BatchQueue::find(const std::string& batch_id) const {
  std::lock_guard lock(mu_);
  for (const auto& e : entries_) {
    if (e.batch.batch_id == batch_id) return e.batch;
  }
  return std::nullopt;
}

SubmitResult BatchQueue::submit(const std::string& batch_id, const Labels& labels) {
  {
    std::lock_guard lock(mu_);
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.batch.batch_id == batch_id; });
    if (it == entries_.end()) return SubmitUnknownBatch{};
    if (it->answer) return SubmitInvalid{"batch " + batch_id + " was already answered"};
    std::set<std::string> items;
    for (const auto& item : it->batch.items) items.insert(item.id);
    for (const auto& [id, _] : labels) {
      if (!items.contains(id)) return SubmitInvalid{"\"" + id + "\" is not part of batch " + batch_id};
    }
    SubmitPartial partial;
    for (const auto& item : it->batch.items) {
      if (!labels.contains(item.id)) partial.missing.push_back(item.id);
    }
    if (!partial.missing.empty()) return partial;
    it->answer = labels;
    it->batch.status = BatchStatus::answered;
  }
  cv_.notify_all();
  return SubmitOk{};
}

std::optional<Labels> BatchQueue::poll(const std::string& batch_id) const {
  std::lock_guard lock(mu_);
  for (const auto& e : entries_) {
    if (e.batch.batch_id == batch_id) return e.answer;
  }
  return std::nullopt;
}

Labels BatchQueue::wait(const std::string& batch_id) {
  std::unique_lock lock(mu_);
  for (;;) {
    if (cancelled_) throw OracleError("labeling cancelled");
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.batch.batch_id == batch_id; });
    if (it == entries_.end()) throw OracleError("unknown batch " + batch_id);
    if (it->answer) return *it->answer;
    cv_.wait(lock);
  }
}

void BatchQueue::cancel() {
  {
    std::lock_guard lock(mu_);
    cancelled_ = true;
  }
  cv_.notify_all();
}

Labels HumanOracle::label(const LabelBatch& batch) {
  const std::string id = queue_.enqueue(batch);
  return queue_.wait(id);
}

}  // namespace seedgraph
