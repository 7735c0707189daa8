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

#include <condition_variable>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "seedgraph/config.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/metrics.hpp"
#include "seedgraph/oracle.hpp"
#include "seedgraph/runlog.hpp"

namespace httplib {
class Server;
}

namespace seedgraph {

enum class RunState { created, propagating, awaiting_labels, done, failed };
std::string to_string(RunState s);
RunState parse_run_state(const std::string& text);
/// created -> propagating <-> awaiting_labels -> done | failed
bool legal_transition(RunState from, RunState to);

struct RunRecord {
  std::string run_id;
  RunConfig config;
  RunState state = RunState::created;
  std::size_t iteration = 0;
  std::string ledger_path;
  std::optional<std::string> error;
};

nlohmann::json to_json(const RunRecord& record);
nlohmann::json to_json(const LabelBatch& batch, const std::string& run_id);
nlohmann::json to_json(const EvalPoint& point);

class UnknownRun : public Error {
 public:
  using Error::Error;
};

/// Result of a human label submission, mapped onto HTTP status codes.
struct SubmitOutcome {
  enum class Kind { accepted, partial, conflict, illegal_state, invalid } kind = Kind::accepted;
  std::vector<std::string> ids;  // missing (partial) or contradicted (conflict)
  std::string message;
};

/// Owns every run under a root directory. Each run has a single worker
/// thread; label submissions for a run are serialized.
class RunManager {
 public:
  explicit RunManager(std::string root_dir, Exec exec = Exec::parallel);
  ~RunManager();
  RunManager(const RunManager&) = delete;
  RunManager& operator=(const RunManager&) = delete;

  /// Restarts every persisted run that had not finished.
  std::size_t resume_all();

  /// Validates `config_doc` and starts the run. Throws ConfigError.
  std::string create(const nlohmann::json& config_doc);

  std::vector<std::string> run_ids() const;
  RunRecord record(const std::string& run_id) const;
  std::optional<LabelBatch> pending_batch(const std::string& run_id) const;
  SubmitOutcome submit(const std::string& run_id, const std::string& batch_id, const Labels& labels);
  nlohmann::json metrics(const std::string& run_id) const;

  /// Blocks until the run reaches one of `states` or the timeout expires.
  bool wait_for(const std::string& run_id, std::vector<RunState> states,
                std::chrono::milliseconds timeout) const;

  /// Cancels outstanding human batches and joins the workers. Runs that were
  /// interrupted stay resumable on disk.
  void shutdown();

  const std::string& root() const noexcept { return root_; }

 private:
  struct Run;
  std::shared_ptr<Run> find(const std::string& run_id) const;
  void start(const std::shared_ptr<Run>& run);
  void work(const std::shared_ptr<Run>& run);
  void set_state(Run& run, RunState state, std::optional<std::string> error = std::nullopt);
  std::string next_id() const;

  std::string root_;
  Exec exec_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Run>> runs_;
  bool stopping_ = false;
};

/// HTTP front end for a RunManager.
class HttpService {
 public:
  explicit HttpService(RunManager& runs);
  ~HttpService();

  /// Binds and serves on a background thread. Port 0 picks a free port.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  RunManager& runs_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

/// Parses "host:port" (or just "port") from SEEDGRAPH_BIND; falls back to
/// 127.0.0.1:8080.
std::pair<std::string, int> bind_address_from_env();

}  // namespace seedgraph
