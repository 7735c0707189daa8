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

// Command-line entry points. Every verb accepts --config <run.json>; flags
// given explicitly override the file.

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "seedgraph/clustered.hpp"
#include "seedgraph/config.hpp"
#include "seedgraph/error.hpp"
#include "seedgraph/ledger.hpp"
#include "seedgraph/metrics.hpp"
#include "seedgraph/runner.hpp"
#include "seedgraph/service.hpp"
#include "seedgraph/simgraph.hpp"
#include "seedgraph/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seedgraph;

namespace {

struct Common {
  std::string config;
  std::string real, synthetic, seeds_file;
  bool no_normalize = false;
  int threads = 0;
};

// Flags bound to a JSON pointer; only the ones the user passed are applied.
struct Overlay {
  std::vector<std::pair<CLI::Option*, std::function<void(json&)>>> items;

  template <class T>
  void bind(CLI::App& app, const std::string& flag, T& target, const std::string& pointer,
            const std::string& help) {
    auto* opt = app.add_option(flag, target, help);
    items.emplace_back(opt, [&target, pointer](json& doc) { doc[json::json_pointer(pointer)] = target; });
  }

  void apply(json& doc) const {
    for (const auto& [opt, put] : items) {
      if (opt->count() > 0) put(doc);
    }
  }
};

void add_common(CLI::App& app, Common& c, bool with_data = true) {
  app.add_option("--config", c.config, "run configuration (JSON)");
  app.add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)");
  if (with_data) {
    app.add_option("--real", c.real, "real pool (JSONL)");
    app.add_option("--synthetic", c.synthetic, "synthetic seed pool (JSONL)");
    app.add_option("--seeds-file", c.seeds_file, "seed ids, one per line (skips selection)");
    app.add_flag("--no-normalize", c.no_normalize, "use embeddings as given");
  }
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

RunConfig build_config(const Common& c, const Overlay& overlay, json fixed = json::object()) {
  json doc = json::object();
  std::string base = ".";
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("", "cannot open config file '" + c.config + "'");
    doc = json::parse(in);
    base = fs::absolute(c.config).parent_path().string();
    // Paths from the file resolve against its directory; flags against the cwd.
    for (const char* key : {"real", "synthetic"}) {
      if (doc.contains("data") && doc["data"].contains(key) && doc["data"][key].is_string()) {
        fs::path p(doc["data"][key].get<std::string>());
        if (p.is_relative()) doc["data"][key] = (fs::path(base) / p).string();
      }
    }
  }
  if (!c.real.empty()) doc["data"]["real"] = absolute(c.real);
  if (!c.synthetic.empty()) doc["data"]["synthetic"] = absolute(c.synthetic);
  if (!c.seeds_file.empty()) doc["seeding"]["seeds_file"] = absolute(c.seeds_file);
  if (c.no_normalize) doc["data"]["normalize"] = false;
  overlay.apply(doc);
  doc.merge_patch(fixed);
  return validate_config(doc, base);
}

void set_threads(int n) {
  if (n > 0) kernels::set_thread_count(n);
}

ReportFormat format_for(const std::string& path, const std::string& flag) {
  if (!flag.empty()) return parse_report_format(flag);
  return fs::path(path).extension() == ".json" ? ReportFormat::json : ReportFormat::csv;
}

void print_summary(const std::string& strategy, const RunLog& log, const std::vector<EvalPoint>& points) {
  json s = {{"strategy", strategy},
            {"batches", log.batches.size()},
            {"labeled", log.labeled_count()},
            {"positives_found", log.positives_found()}};
  if (!points.empty()) {
    s["query_ratio"] = points.back().query_ratio;
    s["precision_cum"] = points.back().precision_cum;
    s["recall_cum"] = points.back().recall_cum;
  }
  for (const auto& w : log.warnings) std::cerr << "warning: " << w << '\n';
  if (log.error) std::cerr << "error: " << *log.error << '\n';
  std::cout << s.dump() << '\n';
}

struct RunFlags {
  std::string report, format;
  bool resume = false;
  std::string oracle;
  std::string root = "runs";
};

int run_strategy(const std::string& strategy, const Common& c, const Overlay& overlay, const RunFlags& f) {
  set_threads(c.threads);
  json fixed = {{"strategy", strategy}};
  std::string oracle = f.oracle == "http" ? "human" : f.oracle;
  if (!oracle.empty()) fixed["oracle"]["kind"] = oracle;
  const RunConfig cfg = build_config(c, overlay, fixed);

  if (cfg.oracle == OracleKind::human) {
    // Labels come from the HTTP API; serve until the run finishes.
    RunManager runs(absolute(f.root));
    HttpService http(runs);
    const auto [host, port] = bind_address_from_env();
    http.start(host, port);
    const std::string id = runs.create(to_json(cfg));
    std::cerr << "run " << id << " waiting for labels at http://" << host << ':' << http.port() << "/runs/" << id
              << "/batch\n";
    runs.wait_for(id, {RunState::done, RunState::failed}, std::chrono::hours(24 * 365));
    const auto rec = runs.record(id);
    std::cout << to_json(rec).dump() << '\n';
    return rec.state == RunState::done ? 0 : 1;
  }

  const RunInputs inputs = load_inputs(cfg);
  std::string report = f.report;
  if (report.empty()) report = (fs::path(cfg.output_dir) / (strategy + ".csv")).string();
  fs::create_directories(fs::absolute(report).parent_path());
  const std::string ledger = ledger_path_for(report);
  if (!f.resume) fs::remove(ledger);
  const RunOutcome out = run_recorded(cfg, inputs, strategy, ledger, report, format_for(report, f.format));
  print_summary(strategy, out.log, out.points);
  return out.log.error ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seedgraph: rare-positive discovery by seed expansion over similarity graphs"};
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  bool check = false;
  auto* ingest = app.add_subcommand("ingest", "load and validate corpora");
  add_common(*ingest, ingest_c);
  ingest->add_option("--seeds", ingest_c.synthetic, "synthetic seed pool (JSONL)");
  ingest->add_flag("--check", check, "also check the two pools are id-disjoint and dimension-compatible");

  // seed
  Common seed_c;
  Overlay seed_o;
  std::string seed_out;
  auto* seed = app.add_subcommand("seed", "select seeds from the synthetic pool");
  add_common(*seed, seed_c);
  std::string method;
  std::size_t k = 0;
  double cov = 0;
  std::uint64_t rng = 0;
  seed_o.bind(*seed, "--method", method, "/seeding/method", "random or acs");
  seed_o.bind(*seed, "--k", k, "/seeding/k", "number of seeds");
  seed_o.bind(*seed, "--c", cov, "/seeding/c", "ACS coverage fraction");
  seed_o.bind(*seed, "--seed", rng, "/rng_seed", "random seed");
  seed->add_option("--out", seed_out, "output file (one id per line)")->required();

  // build-graph
  Common graph_c;
  Overlay graph_o;
  std::string graph_kind = "bipartite", graph_out;
  double g_tau = 0;
  std::size_t g_dmax = 0, g_knn = 0;
  std::string g_lsh;
  std::uint64_t g_seed = 0;
  auto* graph = app.add_subcommand("build-graph", "build and dump a similarity structure");
  add_common(*graph, graph_c);
  graph_o.bind(*graph, "--tau", g_tau, "/graph/tau", "similarity threshold");
  graph_o.bind(*graph, "--dmax", g_dmax, "/graph/d_max", "degree cap per seed");
  graph_o.bind(*graph, "--knn", g_knn, "/graph/knn_cap", "neighbor cap for the similarity graph");
  graph_o.bind(*graph, "--lsh", g_lsh, "/graph/lsh", "auto, on or off");
  graph_o.bind(*graph, "--seed", g_seed, "/graph/lsh_seed", "LSH hyperplane seed");
  graph->add_option("--kind", graph_kind, "bipartite (seeds x pool) or similarity (pool + seeds)")
      ->check(CLI::IsMember({"bipartite", "similarity"}));
  graph->add_option("--out", graph_out, "dump file (JSONL); stdout when omitted");

  // strategies
  Common ibg_c, lp_c, lr_c;
  Overlay ibg_o, lp_o, lr_o;
  RunFlags ibg_f, lp_f, lr_f;
  double i_tau = 0, l_tau = 0;
  std::size_t i_dmax = 0, i_T = 0, l_k0 = 0, l_rounds = 0, l_knn = 0, l_kmax = 0, l_tprop = 0;
  std::size_t r_budget = 0, r_k0 = 0, r_rounds = 0, r_negs = 0, r_epochs = 0;
  double l_eps = 0, flip = 0, r_lr = 0, r_l2 = 0;
  std::string i_method, l_method, r_method;
  std::uint64_t i_seed = 0, l_seed = 0, r_seed = 0;
  std::string i_lsh, l_lsh;

  auto add_run_flags = [](CLI::App& sub, RunFlags& f, Overlay& o, double& flip_ref) {
    sub.add_option("--report", f.report, "report path (.csv or .json); the ledger goes next to it");
    sub.add_option("--format", f.format, "csv or json (default from the extension)");
    sub.add_option("--oracle", f.oracle, "truth, noisy, human or http")
        ->check(CLI::IsMember({"truth", "noisy", "human", "http"}));
    sub.add_flag("--resume", f.resume, "replay answers already in the ledger instead of starting over");
    sub.add_option("--runs-dir", f.root, "run directory for human-oracle runs");
    o.bind(sub, "--flip-prob", flip_ref, "/oracle/flip_prob", "noisy oracle flip probability");
  };

  auto* ibg = app.add_subcommand("run-ibg", "iterative bipartite expansion");
  add_common(*ibg, ibg_c);
  ibg_o.bind(*ibg, "--tau", i_tau, "/graph/tau", "similarity threshold");
  ibg_o.bind(*ibg, "--dmax", i_dmax, "/graph/d_max", "degree cap");
  ibg_o.bind(*ibg, "--T", i_T, "/loop/T", "iterations");
  ibg_o.bind(*ibg, "--lsh", i_lsh, "/graph/lsh", "auto, on or off");
  ibg_o.bind(*ibg, "--method", i_method, "/seeding/method", "seed selection: random or acs");
  ibg_o.bind(*ibg, "--seed", i_seed, "/rng_seed", "random seed");
  add_run_flags(*ibg, ibg_f, ibg_o, flip);

  auto* lp = app.add_subcommand("run-lp", "iterative label propagation");
  add_common(*lp, lp_c);
  lp_o.bind(*lp, "--tau", l_tau, "/graph/tau", "similarity threshold");
  lp_o.bind(*lp, "--knn", l_knn, "/graph/knn_cap", "per-node neighbor cap");
  lp_o.bind(*lp, "--lsh", l_lsh, "/graph/lsh", "auto, on or off");
  lp_o.bind(*lp, "--k0", l_k0, "/loop/k0", "target new positives per round");
  lp_o.bind(*lp, "--kmax", l_kmax, "/loop/k_max", "cap on the batch size");
  lp_o.bind(*lp, "--rounds", l_rounds, "/loop/rounds", "oracle rounds");
  lp_o.bind(*lp, "--t-prop", l_tprop, "/loop/t_prop", "propagation steps per round");
  lp_o.bind(*lp, "--eps", l_eps, "/loop/eps", "convergence tolerance");
  lp_o.bind(*lp, "--method", l_method, "/seeding/method", "seed selection: random or acs");
  lp_o.bind(*lp, "--seed", l_seed, "/rng_seed", "random seed");
  add_run_flags(*lp, lp_f, lp_o, flip);

  auto* lr = app.add_subcommand("run-lr", "logistic-regression active-learning baseline");
  add_common(*lr, lr_c);
  lr_o.bind(*lr, "--budget", r_budget, "/lr/budget", "inference budget B per round");
  lr_o.bind(*lr, "--k0", r_k0, "/loop/k0", "target new positives per round");
  lr_o.bind(*lr, "--rounds", r_rounds, "/loop/rounds", "oracle rounds");
  lr_o.bind(*lr, "--init-negs", r_negs, "/lr/init_negatives", "known negatives given up front");
  lr_o.bind(*lr, "--epochs", r_epochs, "/lr/epochs", "gradient steps per training");
  lr_o.bind(*lr, "--lr", r_lr, "/lr/learning_rate", "learning rate");
  lr_o.bind(*lr, "--l2", r_l2, "/lr/l2", "L2 strength");
  lr_o.bind(*lr, "--method", r_method, "/seeding/method", "seed selection: random or acs");
  lr_o.bind(*lr, "--seed", r_seed, "/rng_seed", "random seed");
  add_run_flags(*lr, lr_f, lr_o, flip);

  // simulate-theory
  std::string theory_config;
  std::size_t t_n = 2000, t_d = 10, t_s = 50, t_trials = 1000;
  double t_p = 0.7, t_q1 = 0.5;
  std::optional<double> t_q2, t_h;
  std::uint64_t t_seed = 7;
  std::string t_out;
  bool t_grid = false;
  int t_threads = 0;
  auto* theory = app.add_subcommand("simulate-theory", "closed forms vs Monte Carlo on planted regular graphs");
  theory->add_option("--config", theory_config, "JSON object with any of n, d, s, p, q1, q2, trials, seed");
  theory->add_option("--n", t_n, "vertices");
  theory->add_option("--d", t_d, "degree");
  theory->add_option("--s", t_s, "seed set size");
  theory->add_option("--p", t_p, "seed validity");
  theory->add_option("--q1", t_q1, "P(positive | one positive seed neighbor)");
  theory->add_option("--q2", t_q2, "P(positive | two positive seed neighbors); default 1 - (1 - q1)^2");
  theory->add_option("--h-target", t_h, "steer the planted expansion ratio");
  theory->add_option("--trials", t_trials, "label realizations");
  theory->add_option("--seed", t_seed, "random seed");
  theory->add_option("--threads", t_threads, "OpenMP threads");
  theory->add_flag("--grid", t_grid, "run the 12-cell grid d in {6,10}, p in {0.3,0.7,1}, q1 in {0.3,0.5}");
  theory->add_option("--out", t_out, "CSV output (stdout when omitted)");

  // report
  std::string rep_config, rep_ledger, rep_pool, rep_format = "csv", rep_out, rep_run;
  auto* report = app.add_subcommand("report", "cumulative metrics from a run ledger");
  report->add_option("--config", rep_config, "run configuration supplying the pool path");
  report->add_option("--run", rep_ledger, "ledger file")->required();
  report->add_option("--pool", rep_pool, "real pool with truth labels (JSONL)");
  report->add_option("--run-id", rep_run, "only rows of this run");
  report->add_option("--format", rep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", rep_out, "output path (stdout when omitted)");

  // serve
  std::string serve_config, serve_root = "runs", serve_bind;
  auto* serve = app.add_subcommand("serve", "HTTP API for runs and the human labeling loop");
  serve->add_option("--config", serve_config, "optional run configuration started on launch");
  serve->add_option("--runs-dir", serve_root, "where runs are persisted");
  serve->add_option("--bind", serve_bind, "host:port (default from SEEDGRAPH_BIND, else 127.0.0.1:8080)");

  // generate-clustered
  std::string gen_config, gen_dir = "data";
  ClusteredSpec gen_spec;
  auto* gen = app.add_subcommand("generate-clustered", "write the clustered benchmark corpus");
  gen->add_option("--config", gen_config, "JSON object overriding generator fields");
  gen->add_option("--out-dir", gen_dir, "directory for real.jsonl and synthetic.jsonl");
  gen->add_option("--seed", gen_spec.seed, "seed for the real pool");
  gen->add_option("--synthetic-seed", gen_spec.synthetic_seed, "seed for the synthetic pool");
  gen->add_option("--n", gen_spec.n_real, "real pool size");
  gen->add_option("--dim", gen_spec.dim, "dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) {
      json doc = json::object();
      if (!ingest_c.config.empty()) {
        const RunConfig cfg = validate_config_file(ingest_c.config);
        if (ingest_c.real.empty()) ingest_c.real = cfg.real_path;
        if (ingest_c.synthetic.empty()) ingest_c.synthetic = cfg.synthetic_path;
      }
      if (ingest_c.real.empty() && ingest_c.synthetic.empty()) throw InvalidArgument("nothing to ingest; pass --real and/or --seeds");
      std::optional<Corpus> real, syn;
      if (!ingest_c.real.empty()) {
        real = load_corpus(ingest_c.real, Source::real);
        if (!ingest_c.no_normalize) real = normalize_unit(*real);
        doc["real"] = {{"records", real->size()}, {"dimension", real->dimension()},
                       {"positives", real->count_positive()}, {"fully_labeled", real->all_labeled()}};
      }
      if (!ingest_c.synthetic.empty()) {
        syn = load_corpus(ingest_c.synthetic, Source::synthetic);
        if (!ingest_c.no_normalize) syn = normalize_unit(*syn);
        doc["synthetic"] = {{"records", syn->size()}, {"dimension", syn->dimension()}};
      }
      if (check && real && syn) {
        if (real->dimension() != syn->dimension()) {
          throw DatasetError("dimension mismatch: real " + std::to_string(real->dimension()) + " vs synthetic " +
                             std::to_string(syn->dimension()));
        }
        for (const auto& r : syn->records()) {
          if (real->contains(r.id)) throw DatasetError("id '" + r.id + "' appears in both pools");
        }
        doc["check"] = "ok";
      }
      std::cout << doc.dump() << '\n';
      return 0;
    }
    if (*seed) {
      set_threads(seed_c.threads);
      SeedConfig sc;
      std::string syn_path = seed_c.synthetic;
      bool normalize = !seed_c.no_normalize;
      if (!seed_c.config.empty()) {
        const RunConfig cfg = validate_config_file(seed_c.config);
        sc = cfg.seeding;
        if (syn_path.empty()) syn_path = cfg.synthetic_path;
        normalize = normalize && cfg.normalize;
      }
      json doc = {{"method", to_string(sc.method)}, {"k", sc.k}, {"c", sc.c}, {"seed", sc.rng_seed}};
      for (const auto& [opt, put] : seed_o.items) {
        if (opt->count() == 0) continue;
        json tmp = json::object();
        put(tmp);
        if (tmp.contains("seeding")) doc.update(tmp["seeding"]);
        if (tmp.contains("rng_seed")) doc["seed"] = tmp["rng_seed"];
      }
      sc.method = parse_seed_method(doc["method"].get<std::string>());
      sc.k = doc["k"].get<std::size_t>();
      sc.c = doc["c"].get<double>();
      sc.rng_seed = doc["seed"].get<std::uint64_t>();
      if (syn_path.empty()) throw InvalidArgument("seed needs --synthetic or --config");
      Corpus syn = load_corpus(syn_path, Source::synthetic);
      if (normalize) syn = normalize_unit(syn);
      const auto ids = select_seeds(syn, sc);
      write_seed_file(seed_out, ids);
      std::cout << json{{"method", to_string(sc.method)}, {"selected", ids.size()}, {"out", seed_out}}.dump()
                << '\n';
      return 0;
    }
    if (*graph) {
      set_threads(graph_c.threads);
      const RunConfig cfg = build_config(graph_c, graph_o);
      const RunInputs in = load_inputs(cfg);
      std::vector<std::size_t> pos;
      for (const auto& id : in.seed_ids) pos.push_back(in.synthetic.position(id));
      std::sort(pos.begin(), pos.end());
      const Corpus seeds = subset(in.synthetic, pos);
      std::ofstream file;
      if (!graph_out.empty()) {
        file.open(graph_out, std::ios::binary | std::ios::trunc);
        if (!file) throw Error("cannot write '" + graph_out + "'");
      }
      std::ostream& out = graph_out.empty() ? std::cout : file;
      if (graph_kind == "bipartite") {
        std::optional<LshIndex> index;
        if (use_lsh(cfg.lsh, in.real.size())) index = build_lsh_index(in.real, cfg.lsh_params);
        const auto g = build_bipartite(seeds, in.real, cfg.tau, cfg.d_max, index ? &*index : nullptr);
        write_graph(out, g);
        std::cerr << "bipartite: " << g.left_ids.size() << " seeds, " << g.edge_count() << " edges\n";
      } else {
        const Corpus all = concat(in.real, seeds);
        std::optional<LshIndex> index;
        if (use_lsh(cfg.lsh, all.size())) index = build_lsh_index(all, cfg.lsh_params);
        const auto g = build_similarity_graph(all, cfg.tau, cfg.knn_cap, index ? &*index : nullptr);
        write_graph(out, g);
        std::cerr << "similarity: " << g.size() << " nodes, " << g.edge_count() << " edges\n";
      }
      return 0;
    }
    if (*ibg) return run_strategy("ibg", ibg_c, ibg_o, ibg_f);
    if (*lp) return run_strategy("lp", lp_c, lp_o, lp_f);
    if (*lr) return run_strategy("lr", lr_c, lr_o, lr_f);
    if (*theory) {
      if (t_threads > 0) kernels::set_thread_count(t_threads);
      if (!theory_config.empty()) {
        std::ifstream in(theory_config);
        if (!in) throw ConfigError("", "cannot open '" + theory_config + "'");
        const json j = json::parse(in);
        for (auto it = j.begin(); it != j.end(); ++it) {
          const std::string& key = it.key();
          if (key == "n") t_n = it->get<std::size_t>();
          else if (key == "d") t_d = it->get<std::size_t>();
          else if (key == "s") t_s = it->get<std::size_t>();
          else if (key == "p") t_p = it->get<double>();
          else if (key == "q1") t_q1 = it->get<double>();
          else if (key == "q2") t_q2 = it->get<double>();
          else if (key == "trials") t_trials = it->get<std::size_t>();
          else if (key == "seed") t_seed = it->get<std::uint64_t>();
          else throw ConfigError("/" + key, "unknown key '" + key + "'");
        }
      }
      struct Cell {
        std::size_t d;
        double p, q1, q2;
      };
      std::vector<Cell> cells;
      if (t_grid) {
        for (std::size_t d : {6, 10})
          for (double p : {0.3, 0.7, 1.0})
            for (double q1 : {0.3, 0.5}) cells.push_back({d, p, q1, theory::q2_from_q1(q1)});
      } else {
        cells.push_back({t_d, t_p, t_q1, t_q2.value_or(theory::q2_from_q1(t_q1))});
      }
      std::ofstream file;
      if (!t_out.empty()) {
        file.open(t_out, std::ios::binary | std::ios::trunc);
        if (!file) throw Error("cannot write '" + t_out + "'");
      }
      std::ostream& out = t_out.empty() ? std::cout : file;
      out.precision(10);
      out << "n,d,s,p,q1,q2,trials,realized_p,measured_h,p_star,closed_precision,mean_precision,se_precision,"
             "closed_recall_proxy,mean_recall_proxy,se_recall_proxy,within_3se\n";
      theory::PlantOptions opts;
      opts.h_target = t_h;
      std::size_t idx = 0;
      for (const auto& c : cells) {
        theory::TheoryParams tp;
        tp.d = c.d;
        tp.p = c.p;
        tp.q1 = c.q1;
        tp.q2 = c.q2;
        tp.s_size = t_s;
        tp.v_size = t_n;
        const auto r = theory::monte_carlo(tp, t_n, t_trials, t_seed + idx++, Exec::parallel, opts);
        out << t_n << ',' << c.d << ',' << t_s << ',' << c.p << ',' << c.q1 << ',' << c.q2 << ',' << t_trials << ','
            << r.realized_p << ',' << r.measured_h << ',' << theory::precision_threshold(c.q1, c.q2, c.d) << ','
            << r.closed_precision << ',' << r.mean_precision << ',' << r.se_precision << ',' << r.closed_recall
            << ',' << r.mean_recall << ',' << r.se_recall << ','
            << (r.precision_within(3.0) && r.recall_within(3.0) ? "yes" : "no") << '\n';
      }
      return 0;
    }
    if (*report) {
      if (rep_pool.empty() && !rep_config.empty()) rep_pool = validate_config_file(rep_config).real_path;
      if (rep_pool.empty()) throw InvalidArgument("report needs --pool or --config");
      const Corpus pool = load_corpus(rep_pool, Source::real);
      const RunLog log = runlog_from_ledger(read_ledger(rep_ledger), rep_run);
      const auto points = evaluate(log, pool);
      const ReportFormat fmt = parse_report_format(rep_format);
      if (rep_out.empty()) {
        write_report(std::cout, points, fmt);
      } else {
        emit_report(points, rep_out, fmt);
      }
      return 0;
    }
    if (*serve) {
      auto [host, port] = bind_address_from_env();
      if (!serve_bind.empty()) {
        setenv("SEEDGRAPH_BIND", serve_bind.c_str(), 1);
        std::tie(host, port) = bind_address_from_env();
      }
      RunManager runs(absolute(serve_root));
      const std::size_t resumed = runs.resume_all();
      if (!serve_config.empty()) {
        std::ifstream in(serve_config);
        const json doc = json::parse(in);
        const RunConfig cfg = validate_config(doc, fs::absolute(serve_config).parent_path().string());
        std::cerr << "started " << runs.create(to_json(cfg)) << '\n';
      }
      HttpService http(runs);
      static HttpService* active = &http;
      std::signal(SIGINT, [](int) { active->stop(); });
      std::signal(SIGTERM, [](int) { active->stop(); });
      std::cerr << "serving on http://" << host << ':' << port << " (" << resumed << " run(s) resumed)\n";
      http.listen(host, port);
      runs.shutdown();
      return 0;
    }
    if (*gen) {
      if (!gen_config.empty()) {
        std::ifstream in(gen_config);
        if (!in) throw ConfigError("", "cannot open '" + gen_config + "'");
        const json j = json::parse(in);
        for (auto it = j.begin(); it != j.end(); ++it) {
          const std::string& key = it.key();
          if (key == "n_real") gen_spec.n_real = it->get<std::size_t>();
          else if (key == "dim") gen_spec.dim = it->get<std::size_t>();
          else if (key == "positive_fraction") gen_spec.positive_fraction = it->get<double>();
          else if (key == "n_synthetic") gen_spec.n_synthetic = it->get<std::size_t>();
          else if (key == "off_target_fraction") gen_spec.off_target_fraction = it->get<double>();
          else if (key == "seed") gen_spec.seed = it->get<std::uint64_t>();
          else if (key == "synthetic_seed") gen_spec.synthetic_seed = it->get<std::uint64_t>();
          else throw ConfigError("/" + key, "unknown key '" + key + "'");
        }
      }
      const ClusteredData data = generate_clustered(gen_spec);
      fs::create_directories(gen_dir);
      save_corpus((fs::path(gen_dir) / "real.jsonl").string(), data.real);
      save_corpus((fs::path(gen_dir) / "synthetic.jsonl").string(), data.synthetic);
      std::cout << json{{"real", data.real.size()}, {"positives", data.real.count_positive()},
                        {"synthetic", data.synthetic.size()}, {"dir", gen_dir}}.dump()
                << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
