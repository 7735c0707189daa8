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

#include <doctest.h>

#include <chrono>
#include <httplib.h>
#include <json.hpp>
#include <thread>

#include "seedgraph/clustered.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/metrics.hpp"
#include "seedgraph/service.hpp"
#include "support.hpp"

using namespace seedgraph;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

struct Fixture {
  testing::TempDir dir;
  ClusteredData data;
  std::string real, synthetic, runs;

  Fixture() {
    ClusteredSpec spec;
    spec.n_real = 800;
    spec.n_synthetic = 200;
    spec.dim = 16;
    spec.positive_clusters = 4;
    spec.negative_clusters = 20;
    spec.unrepresented_clusters = 1;
    data = generate_clustered(spec);
    real = dir.file("real.jsonl");
    synthetic = dir.file("synthetic.jsonl");
    runs = dir.file("runs");
    save_corpus(real, data.real);
    save_corpus(synthetic, data.synthetic);
    std::filesystem::create_directories(runs);
  }

  json config(const std::string& oracle, std::size_t rounds = 3) const {
    return {{"strategy", "lp"},
            {"data", {{"real", real}, {"synthetic", synthetic}}},
            {"seeding", {{"k", 20}}},
            {"graph", {{"tau", 0.6}, {"knn_cap", 10}}},
            {"loop", {{"k0", 10}, {"rounds", rounds}}},
            {"oracle", {{"kind", oracle}}}};
  }
};

json body(const httplib::Result& r) { return json::parse(r->body); }

httplib::Result post(httplib::Client& c, const std::string& path, const json& j) {
  return c.Post(path, j.dump(), "application/json");
}

// Polls until the run has a pending batch or reaches a final state.
json next_batch(httplib::Client& c, const std::string& id) {
  for (int i = 0; i < 2000; ++i) {
    auto r = c.Get("/runs/" + id + "/batch");
    if (r && r->status == 200) return body(r);
    auto rec = body(c.Get("/runs/" + id));
    if (rec["state"] == "done" || rec["state"] == "failed") return json();
    std::this_thread::sleep_for(5ms);
  }
  return json();
}

json truth_labels(const Fixture& f, const json& batch) {
  json labels = json::array();
  for (const auto& item : batch["items"]) {
    const auto id = item["id"].get<std::string>();
    const auto truth = *f.data.real.record(f.data.real.position(id)).truth;
    labels.push_back({{"id", id}, {"label", std::string(to_string(truth))}});
  }
  return labels;
}

}  // namespace

TEST_CASE("truth-oracle run finishes without any label calls") {
  Fixture f;
  RunManager runs(f.runs);
  HttpService http(runs);
  const int port = http.start("127.0.0.1", 0);
  httplib::Client c("127.0.0.1", port);

  auto created = post(c, "/runs", json{{"config", f.config("truth")}});
  REQUIRE(created);
  REQUIRE(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = body(created)["run_id"];
  REQUIRE(runs.wait_for(id, {RunState::done, RunState::failed}, 60s));
  const json rec = body(c.Get("/runs/" + id));
  CHECK(rec["state"] == "done");
  CHECK(c.Get("/runs/" + id + "/batch")->status == 204);

  const json m = body(c.Get("/runs/" + id + "/metrics"));
  CHECK(m["kind"] == "eval");
  REQUIRE(m["points"].size() == 3);

  // Replaying the ledger reproduces the served metrics exactly.
  const auto replayed = evaluate(runlog_from_ledger(read_ledger(rec["ledger_path"]), id), f.data.real);
  REQUIRE(replayed.size() == m["points"].size());
  for (std::size_t i = 0; i < replayed.size(); ++i) CHECK(to_json(replayed[i]) == m["points"][i]);

  const json list = body(c.Get("/runs"));
  CHECK(list.size() == 1);
  CHECK(std::filesystem::exists(std::filesystem::path(f.runs) / id / "report.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(f.runs) / id / "seeds.txt"));
  http.stop();
}

TEST_CASE("human run: fetch, label, propagate, finish") {
  Fixture f;
  RunManager runs(f.runs);
  HttpService http(runs);
  httplib::Client c("127.0.0.1", http.start("127.0.0.1", 0));

  const std::string id = body(post(c, "/runs", f.config("human", 2)))["run_id"];
  json batch = next_batch(c, id);
  REQUIRE(batch.is_object());
  CHECK(body(c.Get("/runs/" + id))["state"] == "awaiting_labels");
  REQUIRE(batch["items"].size() == 10);
  const std::string batch_id = batch["batch_id"];

  // Partial submission: 422 naming exactly the missing ids.
  json labels = truth_labels(f, batch);
  json partial = labels;
  const std::string dropped = partial.back()["id"];
  partial.erase(partial.size() - 1);
  auto r = post(c, "/runs/" + id + "/labels", {{"batch_id", batch_id}, {"labels", partial}});
  REQUIRE(r->status == 422);
  CHECK(body(r)["missing"] == json::array({dropped}));

  CHECK(post(c, "/runs/" + id + "/labels", {{"batch_id", "stale"}, {"labels", labels}})->status == 409);
  CHECK(post(c, "/runs/nope/labels", {{"batch_id", batch_id}, {"labels", labels}})->status == 404);
  CHECK(c.Get("/runs/nope")->status == 404);
  CHECK(c.Post("/runs/" + id + "/labels", "{oops", "application/json")->status == 400);
  json stray = labels;
  stray.push_back({{"id", "not-in-batch"}, {"label", "negative"}});
  CHECK(post(c, "/runs/" + id + "/labels", {{"batch_id", batch_id}, {"labels", stray}})->status == 422);

  r = post(c, "/runs/" + id + "/labels", {{"batch_id", batch_id}, {"labels", labels}});
  REQUIRE(r->status == 200);
  CHECK(body(r)["state"] == "propagating");
  CHECK(read_ledger(runs.record(id).ledger_path).size() == 10);
  // The same batch cannot be answered twice.
  CHECK(post(c, "/runs/" + id + "/labels", {{"batch_id", batch_id}, {"labels", labels}})->status == 409);

  batch = next_batch(c, id);
  REQUIRE(batch.is_object());
  CHECK(batch["iteration"] == 2);
  // Object form of the labels is accepted too.
  json as_object = json::object();
  for (const auto& row : truth_labels(f, batch)) as_object[row["id"].get<std::string>()] = row["label"];
  CHECK(post(c, "/runs/" + id + "/labels", {{"batch_id", batch["batch_id"]}, {"labels", as_object}})->status == 200);

  REQUIRE(runs.wait_for(id, {RunState::done, RunState::failed}, 60s));
  CHECK(runs.record(id).state == RunState::done);
  const json m = body(c.Get("/runs/" + id + "/metrics"));
  CHECK(m["kind"] == "progress");
  const auto ledger = read_ledger(runs.record(id).ledger_path);
  CHECK(m["labeled"] == ledger.size());
  const auto replayed = evaluate(runlog_from_ledger(ledger, id), f.data.real);
  REQUIRE(replayed.size() == m["points"].size());
  for (std::size_t i = 0; i < replayed.size(); ++i) CHECK(to_json(replayed[i]) == m["points"][i]);
  for (const auto& row : ledger) CHECK(row.source == "human");
  http.stop();
}

TEST_CASE("a restarted service resumes a human run at the same iteration") {
  Fixture f;
  std::string id;
  json first;
  {
    RunManager runs(f.runs);
    HttpService http(runs);
    httplib::Client c("127.0.0.1", http.start("127.0.0.1", 0));
    id = body(post(c, "/runs", f.config("human", 3)))["run_id"];
    first = next_batch(c, id);
    REQUIRE(first.is_object());
    REQUIRE(post(c, "/runs/" + id + "/labels", {{"batch_id", first["batch_id"]}, {"labels", truth_labels(f, first)}})
                ->status == 200);
    REQUIRE(next_batch(c, id)["iteration"] == 2);
    http.stop();
    runs.shutdown();
  }
  RunManager runs(f.runs);
  CHECK(runs.resume_all() == 1);
  HttpService http(runs);
  httplib::Client c("127.0.0.1", http.start("127.0.0.1", 0));
  const json again = next_batch(c, id);
  REQUIRE(again.is_object());
  CHECK(again["iteration"] == 2);
  CHECK(read_ledger(runs.record(id).ledger_path).size() == first["items"].size());
  // The first round was replayed from the ledger, not asked again.
  for (const auto& item : again["items"]) {
    for (const auto& old : first["items"]) CHECK(item["id"] != old["id"]);
  }
  http.stop();
}

TEST_CASE("bad configurations and CORS preflight") {
  Fixture f;
  RunManager runs(f.runs);
  HttpService http(runs);
  httplib::Client c("127.0.0.1", http.start("127.0.0.1", 0));
  json cfg = f.config("truth");
  cfg["graph"]["tau"] = 1.5;
  auto r = post(c, "/runs", cfg);
  REQUIRE(r->status == 422);
  CHECK(body(r)["pointer"] == "/graph/tau");
  CHECK(c.Post("/runs", "not json", "application/json")->status == 400);
  auto pre = c.Options("/runs");
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
  CHECK(body(c.Get("/runs")).empty());
  http.stop();
}

TEST_CASE("state machine and bind address") {
  CHECK(legal_transition(RunState::created, RunState::propagating));
  CHECK(legal_transition(RunState::propagating, RunState::awaiting_labels));
  CHECK(legal_transition(RunState::awaiting_labels, RunState::propagating));
  CHECK(legal_transition(RunState::propagating, RunState::done));
  CHECK_FALSE(legal_transition(RunState::created, RunState::done));
  CHECK_FALSE(legal_transition(RunState::done, RunState::propagating));
  CHECK_FALSE(legal_transition(RunState::awaiting_labels, RunState::done));

  ::setenv("SEEDGRAPH_BIND", "0.0.0.0:9123", 1);
  CHECK(bind_address_from_env() == std::pair<std::string, int>{"0.0.0.0", 9123});
  ::unsetenv("SEEDGRAPH_BIND");
  CHECK(bind_address_from_env() == std::pair<std::string, int>{"127.0.0.1", 8080});
}
