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

#include "seedgraph/service.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

#include <httplib.h>

#include "seedgraph/error.hpp"
#include "seedgraph/runner.hpp"

namespace seedgraph {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(RunState s) {
  switch (s) {
    case RunState::created: return "created";
    case RunState::propagating: return "propagating";
    case RunState::awaiting_labels: return "awaiting_labels";
    case RunState::done: return "done";
    case RunState::failed: return "failed";
  }
  return "?";
}

RunState parse_run_state(const std::string& text) {
  for (auto s : {RunState::created, RunState::propagating, RunState::awaiting_labels, RunState::done,
                 RunState::failed}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidArgument("unknown run state '" + text + "'");
}

bool legal_transition(RunState from, RunState to) {
  switch (from) {
    case RunState::created:
      return to == RunState::propagating || to == RunState::failed;
    case RunState::propagating:
      return to == RunState::awaiting_labels || to == RunState::done || to == RunState::failed;
    case RunState::awaiting_labels:
      return to == RunState::propagating || to == RunState::failed;
    case RunState::done:
    case RunState::failed:
      return false;
  }
  return false;
}

json to_json(const RunRecord& r) {
  json j = {{"run_id", r.run_id},
            {"state", to_string(r.state)},
            {"iteration", r.iteration},
            {"ledger_path", r.ledger_path},
            {"config", to_json(r.config)}};
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

json to_json(const LabelBatch& b, const std::string& run_id) {
  json items = json::array();
  for (const auto& it : b.items) {
    items.push_back({{"id", it.id}, {"text", it.text ? json(*it.text) : json(nullptr)}});
  }
  return {{"run_id", run_id},
          {"batch_id", b.batch_id},
          {"iteration", b.iteration},
          {"created_at", b.created_at},
          {"status", b.status == BatchStatus::pending ? "pending" : "answered"},
          {"items", items}};
}

json to_json(const EvalPoint& p) {
  return {{"iteration", p.iteration},     {"queried_cum", p.queried_cum},
          {"query_ratio", p.query_ratio}, {"precision_cum", p.precision_cum},
          {"recall_cum", p.recall_cum},   {"f1_cum", p.f1_cum}};
}

namespace {

// Reports each real oracle call to the owning run.
class TrackingOracle : public Oracle {
 public:
  TrackingOracle(Oracle& inner, std::function<void(const LabelBatch&)> before)
      : inner_(inner), before_(std::move(before)) {}
  Labels label(const LabelBatch& batch) override {
    before_(batch);
    return inner_.label(batch);
  }
  std::string source() const override { return inner_.source(); }

 private:
  Oracle& inner_;
  std::function<void(const LabelBatch&)> before_;
};

// Publishes the batch, flags the run as waiting, then blocks for answers.
class QueueOracle : public Oracle {
 public:
  QueueOracle(BatchQueue& queue, std::function<void()> published)
      : queue_(queue), published_(std::move(published)) {}
  Labels label(const LabelBatch& batch) override {
    const std::string id = queue_.enqueue(batch);
    published_();
    return queue_.wait(id);
  }
  std::string source() const override { return "human"; }

 private:
  BatchQueue& queue_;
  std::function<void()> published_;
};

void write_json_file(const fs::path& path, const json& j) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return json::parse(in);
}

}  // namespace

struct RunManager::Run {
  mutable std::mutex mu;
  mutable std::condition_variable cv;
  RunRecord rec;
  fs::path dir;
  BatchQueue queue;
  std::unique_ptr<Ledger> ledger;
  std::shared_ptr<const RunInputs> inputs;
  std::optional<std::vector<EvalPoint>> final_points;
  std::mutex submit_mu;
  std::thread worker;
};

RunManager::RunManager(std::string root_dir, Exec exec) : root_(std::move(root_dir)), exec_(exec) {
  fs::create_directories(root_);
}

RunManager::~RunManager() { shutdown(); }

void RunManager::shutdown() {
  std::vector<std::shared_ptr<Run>> all;
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    for (auto& [id, run] : runs_) all.push_back(run);
  }
  for (auto& run : all) run->queue.cancel();
  for (auto& run : all) {
    if (run->worker.joinable()) run->worker.join();
  }
}

std::string RunManager::next_id() const {
  std::size_t max_seen = 0;
  for (const auto& e : fs::directory_iterator(root_)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("run-", 0) == 0) {
      try {
        max_seen = std::max<std::size_t>(max_seen, std::stoul(name.substr(4)));
      } catch (const std::exception&) {
      }
    }
  }
  for (const auto& [id, run] : runs_) max_seen = std::max<std::size_t>(max_seen, std::stoul(id.substr(4)));
  char buf[32];
  std::snprintf(buf, sizeof buf, "run-%04zu", max_seen + 1);
  return buf;
}

std::string RunManager::create(const json& config_doc) {
  const json& doc = config_doc.is_object() && config_doc.contains("config") && config_doc.size() == 1
                        ? config_doc.at("config")
                        : config_doc;
  RunConfig cfg = validate_config(doc);
  auto run = std::make_shared<Run>();
  {
    std::lock_guard lock(mu_);
    if (stopping_) throw Error("service is shutting down");
    run->rec.run_id = next_id();
    run->dir = fs::path(root_) / run->rec.run_id;
    fs::create_directories(run->dir);
    run->rec.config = cfg;
    run->rec.ledger_path = (run->dir / "ledger.jsonl").string();
    write_json_file(run->dir / "config.json", to_json(cfg));
    write_json_file(run->dir / "state.json", {{"state", "created"}, {"iteration", 0}, {"error", nullptr}});
    runs_[run->rec.run_id] = run;
  }
  start(run);
  return run->rec.run_id;
}

std::size_t RunManager::resume_all() {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root_)) {
    if (e.is_directory() && fs::exists(e.path() / "config.json")) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::size_t restarted = 0;
  for (const auto& dir : dirs) {
    const std::string id = dir.filename().string();
    {
      std::lock_guard lock(mu_);
      if (runs_.count(id)) continue;
    }
    auto run = std::make_shared<Run>();
    run->dir = dir;
    run->rec.run_id = id;
    run->rec.ledger_path = (dir / "ledger.jsonl").string();
    run->rec.config = validate_config(read_json_file(dir / "config.json"));
    RunState persisted = RunState::created;
    if (fs::exists(dir / "state.json")) {
      const json st = read_json_file(dir / "state.json");
      persisted = parse_run_state(st.at("state").get<std::string>());
      run->rec.iteration = st.value("iteration", std::size_t{0});
      if (st.contains("error") && st["error"].is_string()) run->rec.error = st["error"].get<std::string>();
    }
    const bool terminal = persisted == RunState::done || persisted == RunState::failed;
    {
      std::lock_guard lock(mu_);
      runs_[id] = run;
    }
    if (terminal) {
      run->rec.state = persisted;
      run->ledger = std::make_unique<Ledger>(run->rec.ledger_path, id);
      if (persisted == RunState::done) {
        try {
          run->inputs = std::make_shared<RunInputs>(load_inputs(run->rec.config));
        } catch (const std::exception&) {
          // Metrics stay unavailable if the inputs moved.
        }
      }
    } else {
      start(run);
      ++restarted;
    }
  }
  return restarted;
}

std::shared_ptr<RunManager::Run> RunManager::find(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  auto it = runs_.find(run_id);
  if (it == runs_.end()) throw UnknownRun("unknown run '" + run_id + "'");
  return it->second;
}

std::vector<std::string> RunManager::run_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, run] : runs_) ids.push_back(id);
  return ids;
}

RunRecord RunManager::record(const std::string& run_id) const {
  auto run = find(run_id);
  std::lock_guard lock(run->mu);
  return run->rec;
}

void RunManager::set_state(Run& run, RunState state, std::optional<std::string> error) {
  std::lock_guard lock(run.mu);
  if (run.rec.state == state) return;
  if (!legal_transition(run.rec.state, state)) {
    throw Error("illegal run state transition " + to_string(run.rec.state) + " -> " + to_string(state));
  }
  run.rec.state = state;
  if (error) run.rec.error = std::move(error);
  write_json_file(run.dir / "state.json",
                  {{"state", to_string(state)},
                   {"iteration", run.rec.iteration},
                   {"error", run.rec.error ? json(*run.rec.error) : json(nullptr)}});
  run.cv.notify_all();
}

void RunManager::start(const std::shared_ptr<Run>& run) {
  run->ledger = std::make_unique<Ledger>(run->rec.ledger_path, run->rec.run_id);
  run->rec.state = RunState::created;
  run->worker = std::thread([this, run] { work(run); });
}

void RunManager::work(const std::shared_ptr<Run>& run) {
  auto stopping = [this] {
    std::lock_guard lock(mu_);
    return stopping_;
  };
  try {
    set_state(*run, RunState::propagating);
    const RunConfig& cfg = run->rec.config;
    auto inputs = std::make_shared<const RunInputs>(load_inputs(cfg));
    {
      std::lock_guard lock(run->mu);
      run->inputs = inputs;
    }
    write_seed_file((run->dir / "seeds.txt").string(), inputs->seed_ids);

    std::unique_ptr<Oracle> base;
    if (cfg.oracle == OracleKind::human) {
      base = std::make_unique<QueueOracle>(run->queue, [this, run] { set_state(*run, RunState::awaiting_labels); });
    } else {
      base = make_oracle(cfg, inputs->real);
    }
    TrackingOracle tracking(*base, [run](const LabelBatch& b) {
      std::lock_guard lock(run->mu);
      run->rec.iteration = b.iteration;
    });
    RecordingOracle recording(tracking, *run->ledger);
    RunLog log = execute(cfg, *inputs, recording, exec_);

    if (log.error) {
      if (stopping()) return;
      set_state(*run, RunState::failed, *log.error);
      return;
    }
    std::optional<std::vector<EvalPoint>> points;
    if (inputs->real.all_labeled()) {
      points = evaluate(log, inputs->real);
      emit_report(*points, (run->dir / "report.csv").string(), ReportFormat::csv);
    }
    {
      std::lock_guard lock(run->mu);
      run->final_points = std::move(points);
      if (!log.batches.empty()) run->rec.iteration = log.batches.back().iteration;
    }
    set_state(*run, RunState::propagating);
    set_state(*run, RunState::done);
  } catch (const std::exception& e) {
    if (stopping()) return;
    try {
      set_state(*run, RunState::failed, e.what());
    } catch (const std::exception&) {
    }
  }
}

std::optional<LabelBatch> RunManager::pending_batch(const std::string& run_id) const {
  auto run = find(run_id);
  return run->queue.pending();
}

SubmitOutcome RunManager::submit(const std::string& run_id, const std::string& batch_id,
                                 const Labels& labels) {
  auto run = find(run_id);
  std::lock_guard serial(run->submit_mu);
  SubmitOutcome out;
  const auto pending = run->queue.pending();
  RunState state;
  {
    std::lock_guard lock(run->mu);
    state = run->rec.state;
  }
  if (!pending || state != RunState::awaiting_labels) {
    out.kind = SubmitOutcome::Kind::illegal_state;
    out.message = "run " + run_id + " is " + to_string(state) + " and has no batch awaiting labels";
    return out;
  }
  if (pending->batch_id != batch_id) {
    out.kind = SubmitOutcome::Kind::illegal_state;
    out.message = "batch '" + batch_id + "' is not the pending batch ('" + pending->batch_id + "')";
    return out;
  }
  std::vector<std::string> order;
  for (const auto& item : pending->items) {
    if (!labels.count(item.id)) out.ids.push_back(item.id);
    order.push_back(item.id);
  }
  for (const auto& [id, l] : labels) {
    if (std::find(order.begin(), order.end(), id) == order.end()) {
      out.kind = SubmitOutcome::Kind::invalid;
      out.message = "id '" + id + "' is not part of batch '" + batch_id + "'";
      out.ids.clear();
      return out;
    }
  }
  if (!out.ids.empty()) {
    out.kind = SubmitOutcome::Kind::partial;
    out.message = "partial submission: " + std::to_string(out.ids.size()) + " item(s) unlabeled";
    return out;
  }
  if (auto clash = run->ledger->conflicts(labels); !clash.empty()) {
    out.kind = SubmitOutcome::Kind::conflict;
    out.ids = std::move(clash);
    out.message = "labels contradict the run ledger";
    return out;
  }
  run->ledger->append(pending->iteration, order, labels, "human");
  const SubmitResult r = run->queue.submit(batch_id, labels);
  if (!std::holds_alternative<SubmitOk>(r)) {
    out.kind = SubmitOutcome::Kind::illegal_state;
    out.message = "batch '" + batch_id + "' could not be answered";
    return out;
  }
  set_state(*run, RunState::propagating);
  out.message = "accepted " + std::to_string(order.size()) + " label(s)";
  return out;
}

json RunManager::metrics(const std::string& run_id) const {
  auto run = find(run_id);
  std::shared_ptr<const RunInputs> inputs;
  std::optional<std::vector<EvalPoint>> final_points;
  RunRecord rec;
  {
    std::lock_guard lock(run->mu);
    inputs = run->inputs;
    final_points = run->final_points;
    rec = run->rec;
  }
  const RunLog log = runlog_from_ledger(run->ledger->entries(), run_id);
  json j = {{"run_id", run_id},
            {"state", to_string(rec.state)},
            {"labeled", log.labeled_count()},
            {"positives", log.positives_found()}};
  json batches = json::array();
  for (const auto& b : log.batches) {
    batches.push_back({{"iteration", b.iteration}, {"size", b.ids.size()}, {"positives", b.positives()}});
  }
  j["batches"] = batches;
  const bool evaluable = inputs && inputs->real.all_labeled();
  j["kind"] = evaluable && rec.config.oracle != OracleKind::human ? "eval" : "progress";
  json points = json::array();
  if (evaluable) {
    const auto pts = final_points ? *final_points : evaluate(log, inputs->real);
    for (const auto& p : pts) points.push_back(to_json(p));
  }
  j["points"] = points;
  return j;
}

bool RunManager::wait_for(const std::string& run_id, std::vector<RunState> states,
                          std::chrono::milliseconds timeout) const {
  auto run = find(run_id);
  std::unique_lock lock(run->mu);
  return run->cv.wait_for(lock, timeout, [&] {
    return std::find(states.begin(), states.end(), run->rec.state) != states.end();
  });
}

// --- HTTP ----------------------------------------------------------------------

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  reply(res, status, extra);
}

Labels parse_labels(const json& j) {
  Labels out;
  auto put = [&](const std::string& id, const json& v) {
    if (!v.is_string()) throw InvalidArgument("label for '" + id + "' must be a string");
    out[id] = parse_label(v.get<std::string>());
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) put(it.key(), it.value());
  } else if (j.is_array()) {
    for (const auto& row : j) {
      if (!row.is_object() || !row.contains("id") || !row["id"].is_string() || !row.contains("label")) {
        throw InvalidArgument("each label entry needs string 'id' and 'label'");
      }
      put(row["id"].get<std::string>(), row["label"]);
    }
  } else {
    throw InvalidArgument("'labels' must be an array or an object");
  }
  return out;
}

}  // namespace

HttpService::HttpService(RunManager& runs) : runs_(runs), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const UnknownRun& e) {
      reply_error(res, 404, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });

  s.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    json doc;
    try {
      doc = json::parse(req.body);
    } catch (const json::parse_error& e) {
      return reply_error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    try {
      const std::string id = runs_.create(doc);
      reply(res, 201, {{"run_id", id}});
    } catch (const ConfigError& e) {
      reply_error(res, 422, e.what(), {{"pointer", e.pointer()}});
    }
  });

  s.Get("/runs", [this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& id : runs_.run_ids()) {
      const auto r = runs_.record(id);
      list.push_back({{"run_id", id}, {"state", to_string(r.state)}, {"iteration", r.iteration},
                      {"strategy", to_string(r.config.strategy)}, {"oracle", to_string(r.config.oracle)}});
    }
    reply(res, 200, list);
  });

  s.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, to_json(runs_.record(req.matches[1])));
  });

  s.Get(R"(/runs/([^/]+)/batch)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (auto b = runs_.pending_batch(id)) return reply(res, 200, to_json(*b, id));
    res.status = 204;
  });

  s.Post(R"(/runs/([^/]+)/labels)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    runs_.record(id);  // 404 before body validation
    json doc;
    try {
      doc = json::parse(req.body);
    } catch (const json::parse_error& e) {
      return reply_error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("batch_id") || !doc["batch_id"].is_string() || !doc.contains("labels")) {
      return reply_error(res, 422, "body needs 'batch_id' and 'labels'");
    }
    Labels labels;
    try {
      labels = parse_labels(doc["labels"]);
    } catch (const Error& e) {
      return reply_error(res, 422, e.what());
    }
    const SubmitOutcome out = runs_.submit(id, doc["batch_id"].get<std::string>(), labels);
    switch (out.kind) {
      case SubmitOutcome::Kind::accepted:
        return reply(res, 200, {{"accepted", labels.size()}, {"state", to_string(runs_.record(id).state)}});
      case SubmitOutcome::Kind::partial:
        return reply_error(res, 422, out.message, {{"missing", out.ids}});
      case SubmitOutcome::Kind::invalid:
        return reply_error(res, 422, out.message);
      case SubmitOutcome::Kind::conflict:
        return reply_error(res, 409, out.message, {{"conflicts", out.ids}});
      case SubmitOutcome::Kind::illegal_state:
        return reply_error(res, 409, out.message);
    }
  });

  s.Get(R"(/runs/([^/]+)/metrics)", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, runs_.metrics(req.matches[1]));
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    port_ = port;
  }
  if (port_ < 0) throw Error("cannot bind " + host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpService::listen(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  port_ = port;
  server_->listen_after_bind();
}

void HttpService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> bind_address_from_env() {
  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* v = std::getenv("SEEDGRAPH_BIND"); v && *v) {
    const std::string s(v);
    const auto colon = s.rfind(':');
    try {
      if (colon == std::string::npos) {
        port = std::stoi(s);
      } else {
        if (colon > 0) host = s.substr(0, colon);
        port = std::stoi(s.substr(colon + 1));
      }
    } catch (const std::exception&) {
      throw InvalidArgument("SEEDGRAPH_BIND must look like host:port, got '" + s + "'");
    }
  }
  return {host, port};
}

}  // namespace seedgraph
