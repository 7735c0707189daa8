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
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedgraph/error.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"

namespace seedgraph {

struct LedgerEntry {
  std::string run;
  std::size_t iter = 0;
  std::string id;
  Label label = Label::negative;
  std::string source;

  bool operator==(const LedgerEntry&) const = default;
};

/// Thrown when a label would contradict one already in the ledger.
class LedgerConflict : public Error {
 public:
  LedgerConflict(std::vector<std::string> ids, const std::string& message)
      : Error(message), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

std::string format_ledger_line(const LedgerEntry& entry);
LedgerEntry parse_ledger_line(const std::string& line);
std::vector<LedgerEntry> read_ledger(const std::string& path);

/// Rebuilds the oracle rounds recorded for `run` (all runs when empty).
/// Consecutive rows sharing an iteration form one batch.
RunLog runlog_from_ledger(const std::vector<LedgerEntry>& entries, const std::string& run = {});

/// Append-only label ledger for one run. Existing rows are loaded on open so
/// an interrupted run can resume; every append is flushed before returning.
class Ledger {
 public:
  Ledger(std::string path, std::string run_id);

  const std::string& path() const noexcept { return path_; }
  const std::string& run_id() const noexcept { return run_; }
  std::vector<LedgerEntry> entries() const;
  std::optional<Label> lookup(const std::string& id) const;
  /// Ids whose proposed label differs from the recorded one.
  std::vector<std::string> conflicts(const Labels& labels) const;

  /// Appends rows in `order`; throws LedgerConflict without writing anything
  /// if any label contradicts the ledger. Already-recorded identical rows are skipped.
  void append(std::size_t iter, const std::vector<std::string>& order, const Labels& labels,
              const std::string& source);

 private:
  std::string path_;
  std::string run_;
  mutable std::mutex mu_;
  std::vector<LedgerEntry> entries_;
  std::unordered_map<std::string, Label> by_id_;
  std::ofstream out_;
};

/// Answers from the ledger when every item is already recorded, otherwise
/// asks `inner` for the unrecorded items and appends its answers.
class RecordingOracle : public Oracle {
 public:
  RecordingOracle(Oracle& inner, Ledger& ledger) : inner_(inner), ledger_(ledger) {}
  Labels label(const LabelBatch& batch) override;
  std::string source() const override { return inner_.source(); }
  std::size_t replayed_batches() const noexcept { return replayed_; }

 private:
  Oracle& inner_;
  Ledger& ledger_;
  std::size_t replayed_ = 0;
};

}  // namespace seedgraph
