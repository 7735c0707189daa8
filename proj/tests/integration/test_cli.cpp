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

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "seedgraph/dataset.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/runner.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Result cli(const std::string& args) {
  const std::string cmd = std::string(SEEDGRAPH_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct Workspace {
  testing::TempDir dir;
  std::string d;
  Workspace() : d(dir.path().string()) {
    const Result r = cli("generate-clustered --out-dir " + d + " --n 1500");
    REQUIRE_MESSAGE(r.code == 0, r.out);
  }
  std::string data() const { return " --real " + d + "/real.jsonl --synthetic " + d + "/synthetic.jsonl"; }
};

}  // namespace

TEST_CASE("generate, ingest, seed and build a graph") {
  Workspace w;
  const std::string real = w.d + "/real.jsonl";
  CHECK(line_count(slurp(real)) == 1500);

  Result r = cli("ingest --real " + real + " --seeds " + w.d + "/synthetic.jsonl --check");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("1500") != std::string::npos);

  r = cli("seed --synthetic " + w.d + "/synthetic.jsonl --method random --k 25 --seed 3 --out " + w.d + "/seeds.txt");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const auto seeds = seedgraph::read_seed_file(w.d + "/seeds.txt");
  CHECK(seeds.size() == 25);
  r = cli("seed --synthetic " + w.d + "/synthetic.jsonl --method random --k 25 --seed 3 --out " + w.d + "/again.txt");
  CHECK(slurp(w.d + "/seeds.txt") == slurp(w.d + "/again.txt"));
  r = cli("seed --synthetic " + w.d + "/synthetic.jsonl --method acs --k 50 --c 0.5 --out " + w.d + "/acs.txt");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(seedgraph::read_seed_file(w.d + "/acs.txt").size() <= 50);

  r = cli("build-graph" + w.data() + " --seeds-file " + w.d + "/seeds.txt --kind bipartite --tau 0.8 --dmax 4 --out " +
          w.d + "/g.jsonl");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  std::istringstream g(slurp(w.d + "/g.jsonl"));
  std::string line;
  std::size_t nodes = 0;
  while (std::getline(g, line)) {
    const json j = json::parse(line);
    CHECK(j["nbrs"].size() <= 4);
    for (const auto& nb : j["nbrs"]) CHECK(nb[1].get<double>() > 0.8);
    ++nodes;
  }
  CHECK(nodes == 25);

  r = cli("ingest --real " + w.d + "/missing.jsonl");
  CHECK(r.code != 0);
}

TEST_CASE("strategy runs write deterministic reports and a replayable ledger") {
  Workspace w;
  for (const std::string verb : {"run-ibg --T 3 --tau 0.8 --dmax 16", "run-lp --k0 50 --rounds 3 --tau 0.8",
                                 "run-lr --budget 400 --k0 50 --rounds 2"}) {
    const std::string name = verb.substr(4, verb.find(' ') - 4);
    const std::string a = w.d + "/" + name + "-a.csv", b = w.d + "/" + name + "-b.csv";
    Result r = cli(verb + w.data() + " --report " + a);
    REQUIRE_MESSAGE(r.code == 0, r.out);
    r = cli(verb + w.data() + " --report " + b);
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("iteration,queried_cum", 0) == 0);
    CHECK(line_count(slurp(a)) >= 2);

    const std::string ledger = seedgraph::ledger_path_for(a);
    r = cli("report --run " + ledger + " --pool " + w.d + "/real.jsonl --format csv --out " + w.d + "/replay.csv");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(slurp(w.d + "/replay.csv") == slurp(a));

    r = cli(verb + w.data() + " --report " + a + " --resume");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(slurp(a) == slurp(b));
  }
  const Result j = cli("run-lp --k0 50 --rounds 2" + w.data() + " --report " + w.d + "/lp.json");
  REQUIRE_MESSAGE(j.code == 0, j.out);
  CHECK(json::parse(slurp(w.d + "/lp.json")).size() == 2);
}

TEST_CASE("configuration errors exit with code 2 and name the pointer") {
  Workspace w;
  std::ofstream(w.d + "/cfg.json") << json{{"data", {{"real", "real.jsonl"}, {"synthetic", "synthetic.jsonl"}}},
                                           {"graph", {{"tau", 1.5}}}}
                                          .dump();
  Result r = cli("run-lp --config " + w.d + "/cfg.json --report " + w.d + "/x.csv");
  CHECK(r.code == 2);
  CHECK(r.out.find("/graph/tau") != std::string::npos);

  std::ofstream(w.d + "/ok.json") << json{{"data", {{"real", "real.jsonl"}, {"synthetic", "synthetic.jsonl"}}},
                                          {"loop", {{"k0", 40}, {"rounds", 2}}}}
                                         .dump();
  r = cli("run-lp --config " + w.d + "/ok.json --report " + w.d + "/ok.csv");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(line_count(slurp(w.d + "/ok.csv")) == 3);

  std::ofstream(w.d + "/typo.json") << json{{"data", {{"real", "real.jsonl"}, {"synthetic", "synthetic.jsonl"}}},
                                            {"loops", json::object()}}
                                           .dump();
  r = cli("run-lp --config " + w.d + "/typo.json");
  CHECK(r.code == 2);
  CHECK(r.out.find("loops") != std::string::npos);
}

TEST_CASE("theory simulation prints one row per cell") {
  testing::TempDir dir;
  const std::string out = dir.file("theory.csv");
  const Result r = cli("simulate-theory --n 600 --d 6 --s 20 --p 0.7 --q1 0.5 --trials 200 --seed 7 --out " + out);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const std::string csv = slurp(out);
  CHECK(line_count(csv) == 2);
  CHECK(csv.find("closed_precision") != std::string::npos);
}
