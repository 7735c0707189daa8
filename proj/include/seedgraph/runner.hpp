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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seedgraph/config.hpp"
#include "seedgraph/dataset.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/metrics.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"

namespace seedgraph {

struct RunInputs {
  Corpus real;
  Corpus synthetic;
  std::vector<std::string> seed_ids;
};

std::vector<std::string> read_seed_file(const std::string& path);
void write_seed_file(const std::string& path, const std::vector<std::string>& ids);

/// Loads both corpora (normalized unless disabled) and picks the seeds.
RunInputs load_inputs(const RunConfig& config);

/// Truth or noisy oracle over the real pool; human mode needs `queue`.
std::unique_ptr<Oracle> make_oracle(const RunConfig& config, const Corpus& pool,
                                    BatchQueue* queue = nullptr);

RunLog execute(const RunConfig& config, const RunInputs& inputs, Oracle& oracle,
               Exec exec = Exec::parallel);

struct RunOutcome {
  RunLog log;
  std::vector<EvalPoint> points;  // empty when the pool lacks truth labels
  std::size_t replayed_batches = 0;
};

/// Runs a strategy end to end with every answer recorded in the ledger at
/// `ledger_path` under `run_id`; rows already present are replayed instead
/// of asked again. Writes the report when `report_path` is set.
RunOutcome run_recorded(const RunConfig& config, const RunInputs& inputs, const std::string& run_id,
                        const std::string& ledger_path,
                        const std::optional<std::string>& report_path = std::nullopt,
                        ReportFormat format = ReportFormat::csv, Exec exec = Exec::parallel);

/// Path with its extension replaced by `.ledger`.
std::string ledger_path_for(const std::string& report_path);

}  // namespace seedgraph
