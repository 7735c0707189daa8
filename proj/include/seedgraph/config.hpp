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
#include <string>

#include <json.hpp>

#include "seedgraph/baseline_lr.hpp"
#include "seedgraph/ibg.hpp"
#include "seedgraph/labelprop.hpp"
#include "seedgraph/seeding.hpp"
#include "seedgraph/simgraph.hpp"

namespace seedgraph {

enum class Strategy { ibg, lp, lr };
Strategy parse_strategy(const std::string& text);
std::string to_string(Strategy s);

enum class OracleKind { truth, noisy, human };
OracleKind parse_oracle_kind(const std::string& text);
std::string to_string(OracleKind k);

struct RunConfig {
  Strategy strategy = Strategy::lp;

  // data
  std::string real_path;
  std::string synthetic_path;
  bool normalize = true;

  // seeding; `seeds_path` (one id per line) overrides selection
  SeedConfig seeding;
  std::optional<std::string> seeds_path;

  // graph
  double tau = 0.8;
  std::size_t d_max = 32;
  std::optional<std::size_t> knn_cap;
  LshMode lsh = LshMode::automatic;
  LshParams lsh_params;

  // loop
  std::size_t iterations = 10;  // IBG T
  bool stop_on_empty_batch = true;
  std::size_t rounds = 20;      // LP / LR
  std::size_t k0 = 100;
  std::optional<std::size_t> k_max;
  std::size_t t_prop = 50;
  double eps = 1e-6;

  // LR baseline
  std::optional<std::size_t> budget;
  std::size_t init_negatives = 19;
  LrHyper lr;

  // oracle
  OracleKind oracle = OracleKind::truth;
  double flip_prob = 0.1;

  std::uint64_t rng_seed = 7;
  std::string output_dir = "out";

  IbgConfig ibg_config() const;
  LpRunConfig lp_config() const;
  LrBaselineConfig lr_config() const;
  GraphOptions graph_options(Exec exec = Exec::parallel) const;
};

/// Validates a JSON document, fills defaults and rejects unknown keys.
/// Relative paths resolve against `base_dir`. Errors are ConfigError with a
/// JSON pointer to the offending value.
RunConfig validate_config(const nlohmann::json& doc, const std::string& base_dir = ".");
RunConfig validate_config_file(const std::string& path);

/// Canonical JSON form; validate_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace seedgraph
