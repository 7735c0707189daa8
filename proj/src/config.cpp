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

#include "seedgraph/config.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "seedgraph/error.hpp"

namespace seedgraph {

namespace fs = std::filesystem;
using nlohmann::json;

Strategy parse_strategy(const std::string& text) {
  if (text == "ibg") return Strategy::ibg;
  if (text == "lp") return Strategy::lp;
  if (text == "lr") return Strategy::lr;
  throw InvalidArgument("unknown strategy '" + text + "' (expected ibg, lp or lr)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::ibg: return "ibg";
    case Strategy::lp: return "lp";
    case Strategy::lr: return "lr";
  }
  return "?";
}

OracleKind parse_oracle_kind(const std::string& text) {
  if (text == "truth") return OracleKind::truth;
  if (text == "noisy") return OracleKind::noisy;
  if (text == "human") return OracleKind::human;
  throw InvalidArgument("unknown oracle '" + text + "' (expected truth, noisy or human)");
}

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::truth: return "truth";
    case OracleKind::noisy: return "noisy";
    case OracleKind::human: return "human";
  }
  return "?";
}

IbgConfig RunConfig::ibg_config() const {
  return IbgConfig{tau, d_max, iterations, stop_on_empty_batch};
}

LpRunConfig RunConfig::lp_config() const {
  LpRunConfig c;
  c.k0 = k0;
  c.t_prop = t_prop;
  c.eps = eps;
  c.k_max = k_max;
  c.rounds = rounds;
  c.tau = tau;
  c.knn_cap = knn_cap;
  return c;
}

LrBaselineConfig RunConfig::lr_config() const {
  LrBaselineConfig c;
  c.budget = budget;
  c.k0 = k0;
  c.k_max = k_max;
  c.rounds = rounds;
  c.n_init_negatives = init_negatives;
  c.rng_seed = rng_seed;
  return c;
}

GraphOptions RunConfig::graph_options(Exec exec) const {
  GraphOptions g;
  g.lsh = lsh;
  g.lsh_params = lsh_params;
  g.exec = exec;
  return g;
}

namespace {

// Walks one JSON object, consuming known keys; whatever is left is unknown.
class Section {
 public:
  Section(const json& doc, std::string pointer) : doc_(doc), ptr_(std::move(pointer)) {
    if (!doc_.is_object()) throw ConfigError(ptr_, "expected an object");
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string at(const std::string& key) const { return ptr_ + "/" + key; }

  template <class F>
  void section(const std::string& key, F&& f) {
    if (const json* j = get(key)) {
      Section s(*j, at(key));
      f(s);
      s.finish();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* j = get(key)) {
      if (!j->is_string()) throw ConfigError(at(key), "expected a string");
      out = j->get<std::string>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* j = get(key)) {
      if (!j->is_boolean()) throw ConfigError(at(key), "expected true or false");
      out = j->get<bool>();
    }
  }

  void real(const std::string& key, double& out, const std::function<bool(double)>& ok,
            const std::string& range) {
    if (const json* j = get(key)) {
      if (!j->is_number()) throw ConfigError(at(key), "expected a number");
      const double v = j->get<double>();
      if (!ok(v)) throw ConfigError(at(key), "value " + j->dump() + " out of range; must be " + range);
      out = v;
    }
  }

  template <class T>
  void integer(const std::string& key, T& out, unsigned long long lo, const std::string& range) {
    if (const json* j = get(key)) {
      if (!j->is_number_integer() || (j->is_number_integer() && !j->is_number_unsigned() && j->get<long long>() < 0)) {
        throw ConfigError(at(key), "expected a nonnegative integer");
      }
      const auto v = j->get<unsigned long long>();
      if (v < lo) throw ConfigError(at(key), "value " + j->dump() + " out of range; must be " + range);
      out = static_cast<T>(v);
    }
  }

  template <class T>
  void optional_integer(const std::string& key, std::optional<T>& out, unsigned long long lo,
                        const std::string& range) {
    auto it = doc_.find(key);
    if (it != doc_.end() && !it->is_null()) {
      T v{};
      integer(key, v, lo, range);
      out = v;
    } else {
      seen_.insert(key);
    }
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key '" + it.key() + "'");
    }
  }

 private:
  const json& doc_;
  std::string ptr_;
  std::set<std::string> seen_;
};

std::string resolve(const std::string& path, const std::string& base_dir) {
  fs::path p(path);
  if (p.is_relative()) p = fs::path(base_dir) / p;
  return fs::absolute(p).lexically_normal().string();
}

void require_file(const std::string& pointer, const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError(pointer, "file not found: " + path);
}

}  // namespace

RunConfig validate_config(const json& doc, const std::string& base_dir) {
  RunConfig c;
  Section root(doc, "");

  std::string text = to_string(c.strategy);
  root.string("strategy", text);
  try {
    c.strategy = parse_strategy(text);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/strategy", e.what());
  }

  bool have_data = false;
  root.section("data", [&](Section& s) {
    have_data = true;
    s.string("real", c.real_path);
    s.string("synthetic", c.synthetic_path);
    s.boolean("normalize", c.normalize);
    if (c.real_path.empty()) throw ConfigError("/data/real", "required");
    if (c.synthetic_path.empty()) throw ConfigError("/data/synthetic", "required");
    c.real_path = resolve(c.real_path, base_dir);
    c.synthetic_path = resolve(c.synthetic_path, base_dir);
    require_file("/data/real", c.real_path);
    require_file("/data/synthetic", c.synthetic_path);
  });
  if (!have_data) throw ConfigError("/data", "required");

  root.section("seeding", [&](Section& s) {
    std::string method = to_string(c.seeding.method);
    s.string("method", method);
    try {
      c.seeding.method = parse_seed_method(method);
    } catch (const Error& e) {
      throw ConfigError("/seeding/method", e.what());
    }
    s.integer("k", c.seeding.k, 1, ">= 1");
    s.real("c", c.seeding.c, [](double v) { return v > 0.0 && v <= 1.0; }, "in (0, 1]");
    std::string seeds;
    s.string("seeds_file", seeds);
    if (!seeds.empty()) {
      c.seeds_path = resolve(seeds, base_dir);
      require_file("/seeding/seeds_file", *c.seeds_path);
    }
  });

  root.section("graph", [&](Section& s) {
    s.real("tau", c.tau, [](double v) { return v >= 0.0 && v < 1.0; }, "in [0, 1)");
    s.integer("d_max", c.d_max, 1, ">= 1");
    s.optional_integer("knn_cap", c.knn_cap, 1, ">= 1");
    std::string lsh = to_string(c.lsh);
    s.string("lsh", lsh);
    try {
      c.lsh = parse_lsh_mode(lsh);
    } catch (const Error& e) {
      throw ConfigError("/graph/lsh", e.what());
    }
    s.integer("lsh_tables", c.lsh_params.tables, 1, ">= 1");
    s.integer("lsh_bits", c.lsh_params.bits, 1, "in [1, 64]");
    if (c.lsh_params.bits > 64) throw ConfigError("/graph/lsh_bits", "value out of range; must be in [1, 64]");
    s.integer("lsh_probe_radius", c.lsh_params.probe_radius, 0, "0 or 1");
    if (c.lsh_params.probe_radius > 1) throw ConfigError("/graph/lsh_probe_radius", "value out of range; must be 0 or 1");
    s.integer("lsh_seed", c.lsh_params.seed, 0, ">= 0");
  });

  root.section("loop", [&](Section& s) {
    s.integer("T", c.iterations, 1, ">= 1");
    s.boolean("stop_on_empty_batch", c.stop_on_empty_batch);
    s.integer("rounds", c.rounds, 1, ">= 1");
    s.integer("k0", c.k0, 1, ">= 1");
    s.optional_integer("k_max", c.k_max, 1, ">= k0");
    s.integer("t_prop", c.t_prop, 1, ">= 1");
    s.real("eps", c.eps, [](double v) { return v > 0.0; }, "> 0");
  });
  if (c.k_max && *c.k_max < c.k0) throw ConfigError("/loop/k_max", "value out of range; must be >= k0");

  root.section("lr", [&](Section& s) {
    s.optional_integer("budget", c.budget, 1, ">= k0");
    s.integer("init_negatives", c.init_negatives, 0, ">= 0");
    s.real("learning_rate", c.lr.learning_rate, [](double v) { return v > 0.0; }, "> 0");
    s.integer("epochs", c.lr.epochs, 1, ">= 1");
    s.real("l2", c.lr.l2, [](double v) { return v >= 0.0; }, ">= 0");
    s.boolean("warm_start", c.lr.warm_start);
  });
  if (c.budget && *c.budget < c.k0) throw ConfigError("/lr/budget", "value out of range; must be >= k0");

  root.section("oracle", [&](Section& s) {
    std::string kind = to_string(c.oracle);
    s.string("kind", kind);
    try {
      c.oracle = parse_oracle_kind(kind);
    } catch (const Error& e) {
      throw ConfigError("/oracle/kind", e.what());
    }
    s.real("flip_prob", c.flip_prob, [](double v) { return v >= 0.0 && v < 0.5; }, "in [0, 0.5)");
  });

  root.integer("rng_seed", c.rng_seed, 0, ">= 0");
  c.seeding.rng_seed = c.rng_seed;
  root.string("output_dir", c.output_dir);
  c.output_dir = resolve(c.output_dir, base_dir);
  root.finish();
  return c;
}

RunConfig validate_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return validate_config(doc, fs::absolute(fs::path(path)).parent_path().string());
}

json to_json(const RunConfig& c) {
  json j;
  j["strategy"] = to_string(c.strategy);
  j["data"] = {{"real", c.real_path}, {"synthetic", c.synthetic_path}, {"normalize", c.normalize}};
  j["seeding"] = {{"method", to_string(c.seeding.method)}, {"k", c.seeding.k}, {"c", c.seeding.c}};
  if (c.seeds_path) j["seeding"]["seeds_file"] = *c.seeds_path;
  j["graph"] = {{"tau", c.tau},
                {"d_max", c.d_max},
                {"knn_cap", c.knn_cap ? json(*c.knn_cap) : json(nullptr)},
                {"lsh", to_string(c.lsh)},
                {"lsh_tables", c.lsh_params.tables},
                {"lsh_bits", c.lsh_params.bits},
                {"lsh_probe_radius", c.lsh_params.probe_radius},
                {"lsh_seed", c.lsh_params.seed}};
  j["loop"] = {{"T", c.iterations},
               {"stop_on_empty_batch", c.stop_on_empty_batch},
               {"rounds", c.rounds},
               {"k0", c.k0},
               {"k_max", c.k_max ? json(*c.k_max) : json(nullptr)},
               {"t_prop", c.t_prop},
               {"eps", c.eps}};
  j["lr"] = {{"budget", c.budget ? json(*c.budget) : json(nullptr)},
             {"init_negatives", c.init_negatives},
             {"learning_rate", c.lr.learning_rate},
             {"epochs", c.lr.epochs},
             {"l2", c.lr.l2},
             {"warm_start", c.lr.warm_start}};
  j["oracle"] = {{"kind", to_string(c.oracle)}, {"flip_prob", c.flip_prob}};
  j["rng_seed"] = c.rng_seed;
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace seedgraph
