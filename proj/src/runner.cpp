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

#include "seedgraph/runner.hpp"

#include <filesystem>
#include <fstream>

#include "seedgraph/baseline_lr.hpp"
#include "seedgraph/error.hpp"
#include "seedgraph/ibg.hpp"
#include "seedgraph/labelprop.hpp"
#include "seedgraph/seeding.hpp"

namespace seedgraph {

std::vector<std::string> read_seed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open seed file '" + path + "'");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  if (ids.empty()) throw DatasetError("seed file '" + path + "' lists no ids");
  return ids;
}

void write_seed_file(const std::string& path, const std::vector<std::string>& ids) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  for (const auto& id : ids) out << id << '\n';
}

RunInputs load_inputs(const RunConfig& config) {
  RunInputs in;
  in.real = load_corpus(config.real_path, Source::real);
  in.synthetic = load_corpus(config.synthetic_path, Source::synthetic);
  if (config.normalize) {
    in.real = normalize_unit(in.real);
    in.synthetic = normalize_unit(in.synthetic);
  }
  if (config.seeds_path) {
    in.seed_ids = read_seed_file(*config.seeds_path);
    for (const auto& id : in.seed_ids) {
      if (!in.synthetic.contains(id)) throw DatasetError("seed id '" + id + "' is not in the synthetic corpus");
    }
  } else {
    in.seed_ids = select_seeds(in.synthetic, config.seeding);
  }
  return in;
}

std::unique_ptr<Oracle> make_oracle(const RunConfig& config, const Corpus& pool, BatchQueue* queue) {
  switch (config.oracle) {
    case OracleKind::truth:
      return std::make_unique<TruthOracle>(pool);
    case OracleKind::noisy:
      return std::make_unique<NoisyOracle>(pool, config.flip_prob, config.rng_seed);
    case OracleKind::human:
      if (!queue) throw InvalidArgument("the human oracle needs a batch queue (use the service)");
      return std::make_unique<HumanOracle>(*queue);
  }
  throw InvalidArgument("unknown oracle kind");
}

RunLog execute(const RunConfig& config, const RunInputs& inputs, Oracle& oracle, Exec exec) {
  const GraphOptions graph = config.graph_options(exec);
  switch (config.strategy) {
    case Strategy::ibg:
      return run_ibg(inputs.real, inputs.synthetic, inputs.seed_ids, config.ibg_config(), oracle, graph);
    case Strategy::lp:
      return run_lp(inputs.real, inputs.synthetic, inputs.seed_ids, config.lp_config(), oracle, graph);
    case Strategy::lr:
      return run_lr_baseline(inputs.real, inputs.synthetic, inputs.seed_ids, config.lr_config(), oracle,
                             config.lr);
  }
  throw InvalidArgument("unknown strategy");
}

RunOutcome run_recorded(const RunConfig& config, const RunInputs& inputs, const std::string& run_id,
                        const std::string& ledger_path, const std::optional<std::string>& report_path,
                        ReportFormat format, Exec exec) {
  auto inner = make_oracle(config, inputs.real);
  Ledger ledger(ledger_path, run_id);
  RecordingOracle oracle(*inner, ledger);
  RunOutcome out;
  out.log = execute(config, inputs, oracle, exec);
  out.replayed_batches = oracle.replayed_batches();
  if (inputs.real.all_labeled()) out.points = evaluate(out.log, inputs.real);
  if (report_path) emit_report(out.points, *report_path, format);
  return out;
}

std::string ledger_path_for(const std::string& report_path) {
  return std::filesystem::path(report_path).replace_extension(".ledger").string();
}

}  // namespace seedgraph
