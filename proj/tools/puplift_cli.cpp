// Copyright 2026 The Puplift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "puplift/examples.hpp"
#include "puplift/hypothesis.hpp"
#include "puplift/instance.hpp"
#include "puplift/learner.hpp"
#include "puplift/solver.hpp"
#include "puplift/stats.hpp"
#include "puplift/symmetry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace puplift;

namespace {

int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// All run outputs are written atomically: full content to a temp file in
// the same directory, then renamed over the target.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

// "double-8" or "un-triple-9"; the generator embeds the same name.
PupInstance instance_from_spec(const std::string& spec, uint64_t seed) {
  std::string rest = spec;
  bool unsat = false;
  if (rest.rfind("un-", 0) == 0) {
    unsat = true;
    rest = rest.substr(3);
  }
  auto dash = rest.rfind('-');
  if (dash == std::string::npos) {
    throw std::runtime_error("bad instance spec: " + spec);
  }
  auto family = family_from_name(rest.substr(0, dash));
  if (!family) throw std::runtime_error("unknown family in spec: " + spec);
  int zones = std::stoi(rest.substr(dash + 1));
  return generate_instance(*family, zones, unsat, seed);
}

// Accepts either a fact-file path or an inline spec like "double-8".
PupInstance load_instance(const std::string& arg, uint64_t seed) {
  if (fs::exists(arg)) return parse_instance(read_file(arg));
  return instance_from_spec(arg, seed);
}

std::vector<Constraint> load_constraints(const std::string& path) {
  if (path.empty()) return {};
  return parse_constraints(read_file(path));
}

std::map<std::string, std::string> parse_config(const std::string& path) {
  std::map<std::string, std::string> cfg;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) cfg[key] = val;
  }
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json hypothesis_json(const std::vector<Constraint>& hyp) {
  json arr = json::array();
  for (const auto& r : hyp) arr.push_back(to_string(r));
  return arr;
}

json result_json(const CdilpResult& res) {
  json report;
  report["satisfiable"] = res.satisfiable;
  report["optimal"] = res.optimal;
  report["cost"] = res.cost;
  report["hypothesis"] = hypothesis_json(res.hypothesis);
  report["sacrificed"] = res.sacrificed;
  report["warnings"] = res.warnings;
  json iters = json::array();
  for (const auto& it : res.iterations) {
    iters.push_back({{"cc_size", it.cc_size},
                     {"cost", it.cost},
                     {"analyzed", it.analyzed},
                     {"elapsed_ms", it.elapsed_ms}});
  }
  report["iterations"] = iters;
  return report;
}

struct GlobalOpts {
  uint64_t seed = 0;
  int64_t timeout_ms = 60000;
  std::string out_dir = ".";
  std::string config_file;
};

int cmd_gen_instance(const GlobalOpts& g, const std::string& family_s,
                     int zones, bool unsat) {
  auto family = family_from_name(family_s);
  if (!family) throw std::runtime_error("unknown family: " + family_s);
  PupInstance inst = generate_instance(*family, zones, unsat, g.seed);
  fs::create_directories(g.out_dir);
  fs::path path = fs::path(g.out_dir) / (inst.name + ".lp");
  write_file_atomic(path, write_instance(inst));
  std::cout << json{{"instance", inst.name},
                    {"file", path.string()},
                    {"zones", inst.num_zones()},
                    {"sensors", inst.num_sensors()},
                    {"units", inst.num_units()}}
            << "\n";
  return 0;
}

int cmd_solve(const GlobalOpts& g, const std::string& inst_arg,
              const std::string& abk_path) {
  PupInstance inst = load_instance(inst_arg, g.seed);
  auto rules = load_constraints(abk_path);
  SearchConfig cfg;
  cfg.seed = g.seed;
  cfg.limit = 1;
  cfg.timeout_ms = g.timeout_ms;
  SearchOutcome out;
  int64_t t0 = now_ms();
  auto sols = enumerate_solutions(inst, ground_all(rules, inst), cfg, &out);
  int64_t ms = now_ms() - t0;
  json rec{{"instance", inst.name},
           {"satisfiable", !sols.empty()},
           {"runtime_ms", ms},
           {"nodes", out.nodes},
           {"truncated", out.truncated}};
  std::cout << rec << "\n";
  if (!sols.empty()) std::cout << write_solution(sols.front());
  return 0;
}

int cmd_enumerate(const GlobalOpts& g, const std::string& inst_arg,
                  const std::string& abk_path, uint64_t limit) {
  PupInstance inst = load_instance(inst_arg, g.seed);
  auto rules = load_constraints(abk_path);
  SearchConfig cfg;
  cfg.seed = g.seed;
  if (limit > 0) cfg.limit = limit;
  cfg.timeout_ms = g.timeout_ms;
  SearchOutcome out;
  int64_t t0 = now_ms();
  uint64_t count = count_solutions(inst, ground_all(rules, inst), cfg, &out);
  std::cout << json{{"instance", inst.name},
                    {"count", count},
                    {"nodes", out.nodes},
                    {"truncated", out.truncated},
                    {"runtime_ms", now_ms() - t0}}
            << "\n";
  return 0;
}

int cmd_detect_sym(const GlobalOpts& g, const std::string& inst_arg) {
  PupInstance inst = load_instance(inst_arg, g.seed);
  auto gens = detect_generators(inst);
  auto ord = AtomOrder::from_generators(inst, gens);
  fs::create_directories(g.out_dir);
  fs::path path = fs::path(g.out_dir) / (inst.name + ".gens");
  write_file_atomic(path, write_generators(gens));
  std::cout << json{{"instance", inst.name},
                    {"generators", gens.size()},
                    {"ordered_atoms", ord.atoms.size()},
                    {"file", path.string()}}
            << "\n";
  return 0;
}

int cmd_gen_examples(const GlobalOpts& g, const std::string& inst_arg,
                     const std::string& strategy, uint64_t n, uint64_t cells,
                     uint64_t max_cell_size) {
  PupInstance inst = load_instance(inst_arg, g.seed);
  auto gens = detect_generators(inst);
  auto ord = AtomOrder::from_generators(inst, gens);
  ExampleGenResult res;
  if (strategy == "enum") {
    if (n == 0) throw std::runtime_error("enum strategy needs --n > 0");
    res = scalable_enum(inst, gens, ord, n, g.seed);
  } else if (strategy == "fullsbcs") {
    if (cells == 0) throw std::runtime_error("fullsbcs needs --cells > 0");
    res = scalable_fullsbcs(inst, gens, ord, cells, max_cell_size, g.seed);
  } else {
    throw std::runtime_error("unknown strategy: " + strategy);
  }
  fs::create_directories(g.out_dir);
  fs::path path = fs::path(g.out_dir) / (inst.name + ".examples");
  write_file_atomic(path, write_examples(res.examples));
  std::cout << json{{"instance", inst.name},
                    {"examples", res.examples.size()},
                    {"one_sided", res.one_sided},
                    {"diagnostic", res.diagnostic},
                    {"file", path.string()}}
            << "\n";
  return 0;
}

// Examples whose context cannot be enumerated within 5 seconds switch the
// learner to subsumption-based analysis; the probe is cached per context.
std::set<std::string> flag_sbca_ids(const std::vector<CdpiExample>& examples) {
  std::set<std::string> flagged;
  std::map<std::string, bool> slow_by_name;
  for (const auto& e : examples) {
    auto it = slow_by_name.find(e.context.name);
    if (it == slow_by_name.end()) {
      SearchConfig cfg;
      cfg.timeout_ms = 5000;
      SearchOutcome out;
      count_solutions(e.context, {}, cfg, &out);
      it = slow_by_name.emplace(e.context.name, out.truncated).first;
    }
    if (it->second) flagged.insert(e.id);
  }
  return flagged;
}

int cmd_learn(const GlobalOpts& g,
              const std::vector<std::string>& example_files,
              const std::string& scheme_s, const std::string& name) {
  LearnerState state;
  state.space = build_space(pup_bias());
  state.scheme = scheme_s == "custom" ? ScoreScheme::Custom
                                      : ScoreScheme::Default;
  for (const auto& path : example_files) {
    auto part = parse_examples(read_file(path));
    state.examples.insert(state.examples.end(), part.begin(), part.end());
  }
  state.sbca_example_ids = flag_sbca_ids(state.examples);
  CdilpConfig cfg;
  cfg.budget_ms = g.timeout_ms;
  CdilpResult res = cdilp(state, cfg);
  fs::create_directories(g.out_dir);
  fs::path rules_path = fs::path(g.out_dir) / (name + ".lp");
  fs::path report_path = fs::path(g.out_dir) / (name + ".json");
  write_file_atomic(rules_path, write_constraints(res.hypothesis));
  json report = result_json(res);
  report["space_size"] = state.space.size();
  report["sbca_example_ids"] = state.sbca_example_ids;
  write_file_atomic(report_path, report.dump(2) + "\n");
  std::cout << json{{"rules", rules_path.string()},
                    {"report", report_path.string()},
                    {"satisfiable", res.satisfiable},
                    {"optimal", res.optimal},
                    {"cost", res.cost}}
            << "\n";
  return 0;
}

struct PipelineConfig {
  std::vector<std::string> train;
  std::vector<std::string> gen;
  std::string strategy = "fullsbcs";
  uint64_t n = 0;
  uint64_t cells = 20;
  uint64_t max_cell_size = 5;
  ScoreScheme scheme = ScoreScheme::Custom;
  std::vector<uint64_t> seeds;
  int64_t learn_timeout_ms = 300000;
  int64_t solve_timeout_ms = 60000;
};

PipelineConfig pipeline_config(const std::map<std::string, std::string>& kv) {
  PipelineConfig cfg;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("train")) cfg.train = split_list(*v);
  if (auto v = get("gen")) cfg.gen = split_list(*v);
  if (auto v = get("strategy")) cfg.strategy = *v;
  if (auto v = get("n")) cfg.n = std::stoull(*v);
  if (auto v = get("cells")) cfg.cells = std::stoull(*v);
  if (auto v = get("max_cell_size")) cfg.max_cell_size = std::stoull(*v);
  if (auto v = get("scheme")) {
    cfg.scheme = *v == "default" ? ScoreScheme::Default : ScoreScheme::Custom;
  }
  if (auto v = get("seeds")) {
    for (const auto& s : split_list(*v)) cfg.seeds.push_back(std::stoull(s));
  }
  if (cfg.seeds.empty()) {
    for (uint64_t s = 1; s <= 12; ++s) cfg.seeds.push_back(s);
  }
  if (auto v = get("learn_timeout_ms")) cfg.learn_timeout_ms = std::stoll(*v);
  if (auto v = get("solve_timeout_ms")) cfg.solve_timeout_ms = std::stoll(*v);
  if (cfg.train.empty() || cfg.gen.empty()) {
    throw std::runtime_error("pipeline config needs non-empty train and gen");
  }
  if (cfg.strategy == "enum" && cfg.n == 0) {
    throw std::runtime_error("enum strategy needs n > 0");
  }
  if (cfg.strategy == "fullsbcs" && cfg.cells == 0) {
    throw std::runtime_error("fullsbcs strategy needs cells > 0");
  }
  return cfg;
}

int cmd_pipeline(const GlobalOpts& g) {
  if (g.config_file.empty()) {
    throw std::runtime_error("pipeline needs --config FILE");
  }
  PipelineConfig cfg = pipeline_config(parse_config(g.config_file));
  fs::create_directories(g.out_dir);
  const auto space = build_space(pup_bias());

  auto run_seed = [&](uint64_t seed) -> json {
    json rec{{"seed", seed}};
    std::vector<CdpiExample> examples;
    for (const auto& spec : cfg.train) {
      PupInstance inst = instance_from_spec(spec, seed);
      auto gens = detect_generators(inst);
      auto ord = AtomOrder::from_generators(inst, gens);
      ExampleGenResult er =
          cfg.strategy == "enum"
              ? scalable_enum(inst, gens, ord, cfg.n, seed)
              : scalable_fullsbcs(inst, gens, ord, cfg.cells,
                                  cfg.max_cell_size, seed);
      if (er.one_sided || er.examples.empty()) {
        rec["skipped"] = true;
        rec["diagnostic"] = er.diagnostic;
        return rec;
      }
      examples.insert(examples.end(), er.examples.begin(), er.examples.end());
    }
    for (const auto& spec : cfg.gen) {
      examples.push_back(gen_positive(instance_from_spec(spec, seed)));
    }
    LearnerState state;
    state.space = space;
    state.examples = std::move(examples);
    state.scheme = cfg.scheme;
    state.sbca_example_ids = flag_sbca_ids(state.examples);
    CdilpConfig lc;
    lc.budget_ms = cfg.learn_timeout_ms;
    CdilpResult res = cdilp(state, lc);
    std::string base = "seed" + std::to_string(seed);
    write_file_atomic(fs::path(g.out_dir) / (base + ".lp"),
                      write_constraints(res.hypothesis));
    json report = result_json(res);
    report["seed"] = seed;
    report["sbca_example_ids"] = state.sbca_example_ids;
    write_file_atomic(fs::path(g.out_dir) / (base + ".json"),
                      report.dump(2) + "\n");
    rec["skipped"] = false;
    rec["satisfiable"] = res.satisfiable;
    rec["optimal"] = res.optimal;
    rec["cost"] = res.cost;
    rec["rules"] = res.hypothesis.size();
    return rec;
  };

  // Bounded worker pool over seeds; each worker writes its own artifacts.
  std::vector<json> records(cfg.seeds.size());
  std::atomic<size_t> next{0};
  size_t workers = std::min<size_t>(
      cfg.seeds.size(),
      std::max<size_t>(1, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < cfg.seeds.size();
           i = next.fetch_add(1)) {
        records[i] = run_seed(cfg.seeds[i]);
      }
    });
  }
  for (auto& t : pool) t.join();

  json summary{{"train", cfg.train}, {"gen", cfg.gen}, {"runs", records}};
  write_file_atomic(fs::path(g.out_dir) / "pipeline.json",
                    summary.dump(2) + "\n");
  std::cout << summary << "\n";
  return 0;
}

int cmd_benchmark(const GlobalOpts& g,
                  const std::vector<std::string>& inst_args,
                  const std::string& abk_path) {
  auto abk = load_constraints(abk_path);
  std::ostringstream csv;
  csv << "instance,condition,verdict,runtime_ms,nodes,solutions\n";
  // Rows run sequentially so the runtimes are not distorted by contention.
  for (const auto& arg : inst_args) {
    PupInstance inst = load_instance(arg, g.seed);
    for (int cond = 0; cond < (abk_path.empty() ? 1 : 2); ++cond) {
      const bool with_abk = cond == 1;
      SearchConfig cfg;
      cfg.seed = g.seed;
      cfg.limit = 1;
      cfg.timeout_ms = g.timeout_ms;
      SearchOutcome out;
      int64_t t0 = now_ms();
      uint64_t count = count_solutions(
          inst, with_abk ? ground_all(abk, inst) : std::vector<GroundConstraint>{},
          cfg, &out);
      int64_t ms = now_ms() - t0;
      std::string verdict = count > 0 ? "sat" : out.truncated ? "timeout" : "unsat";
      csv << inst.name << ',' << (with_abk ? "with_abk" : "plain") << ','
          << verdict << ','
          << (verdict == "timeout" ? std::string("TIMEOUT")
                                   : std::to_string(ms))
          << ',' << out.nodes << ',' << count << "\n";
    }
  }
  fs::create_directories(g.out_dir);
  fs::path path = fs::path(g.out_dir) / "benchmark.csv";
  write_file_atomic(path, csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_stats(const std::string& csv_path) {
  // Pairs plain/with_abk runtimes per instance from a benchmark CSV; bare
  // two-column "x,y" files are accepted too.
  std::istringstream in(read_file(csv_path));
  std::string line;
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>>
      by_instance;
  std::vector<double> xs, ys;
  bool bench_format = false;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split_list(line);
    if (lineno == 1 && !cols.empty() && cols[0] == "instance") {
      bench_format = true;
      continue;
    }
    if (bench_format) {
      if (cols.size() < 4 || cols[3] == "TIMEOUT") continue;
      double ms = std::stod(cols[3]);
      if (cols[1] == "plain") by_instance[cols[0]].first = ms;
      if (cols[1] == "with_abk") by_instance[cols[0]].second = ms;
    } else if (cols.size() >= 2) {
      xs.push_back(std::stod(cols[0]));
      ys.push_back(std::stod(cols[1]));
    }
  }
  if (bench_format) {
    for (const auto& [name, pair] : by_instance) {
      if (pair.first && pair.second) {
        xs.push_back(*pair.first);
        ys.push_back(*pair.second);
      }
    }
  }
  auto r = wilcoxon_signed_rank(xs, ys);
  json rec{{"pairs", xs.size()},
           {"n", r.n},
           {"exact", r.exact},
           {"undefined", r.n == 0}};
  if (r.n > 0) {
    rec["statistic"] = r.statistic;
    rec["p_value"] = r.p_value;
  }
  std::cout << rec << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PUP symmetry-breaking constraint learning toolkit"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "Seed for randomized search and sampling");
  app.add_option("--timeout-ms", g.timeout_ms, "Wall-clock budget per task");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--config", g.config_file, "key=value configuration file");

  std::string family = "double", inst_arg, abk_path, strategy = "fullsbcs";
  std::string scheme = "custom", learn_name = "learned", csv_path;
  std::vector<std::string> example_files, bench_instances;
  int zones = 6;
  bool unsat = false;
  uint64_t limit = 0, n = 0, cells = 20, max_cell_size = 5;

  auto* gi = app.add_subcommand("gen-instance", "Generate a PUP instance");
  gi->add_option("--family", family, "double | doublev | triple");
  gi->add_option("--zones", zones, "Number of zones");
  gi->add_flag("--unsat", unsat, "One unit fewer than the satisfiable minimum");

  auto* so = app.add_subcommand("solve", "Find one solution");
  so->add_option("instance", inst_arg, "Instance file or spec")->required();
  so->add_option("--abk", abk_path, "Constraint file used as background");

  auto* en = app.add_subcommand("enumerate", "Count solutions");
  en->add_option("instance", inst_arg, "Instance file or spec")->required();
  en->add_option("--abk", abk_path, "Constraint file used as background");
  en->add_option("--limit", limit, "Stop after this many solutions");

  auto* ds = app.add_subcommand("detect-sym", "Detect symmetry generators");
  ds->add_option("instance", inst_arg, "Instance file or spec")->required();

  auto* ge = app.add_subcommand("gen-examples", "Generate learning examples");
  ge->add_option("instance", inst_arg, "Instance file or spec")->required();
  ge->add_option("--strategy", strategy, "enum | fullsbcs");
  ge->add_option("--n", n, "Enumeration sample size (enum strategy)");
  ge->add_option("--cells", cells, "Orbit budget (fullsbcs strategy)");
  ge->add_option("--max-cell-size", max_cell_size, "Negatives per orbit");

  auto* le = app.add_subcommand("learn", "Run conflict-driven learning");
  le->add_option("examples", example_files, "Example files")->required();
  le->add_option("--scheme", scheme, "default | custom scoring");
  le->add_option("--name", learn_name, "Basename for rule and report files");

  auto* pi = app.add_subcommand("pipeline", "Full learn-and-report pipeline");

  auto* be = app.add_subcommand("benchmark", "Paired plain/ABK solving table");
  be->add_option("instances", bench_instances, "Instance files or specs")
      ->required();
  be->add_option("--abk", abk_path, "Learned constraint file");

  auto* st = app.add_subcommand("stats", "Wilcoxon signed-rank over pairs");
  st->add_option("csv", csv_path, "Benchmark CSV or x,y pair file")->required();

  // Global flags may appear after the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (gi->parsed()) return cmd_gen_instance(g, family, zones, unsat);
    if (so->parsed()) return cmd_solve(g, inst_arg, abk_path);
    if (en->parsed()) return cmd_enumerate(g, inst_arg, abk_path, limit);
    if (ds->parsed()) return cmd_detect_sym(g, inst_arg);
    if (ge->parsed()) {
      return cmd_gen_examples(g, inst_arg, strategy, n, cells, max_cell_size);
    }
    if (le->parsed()) return cmd_learn(g, example_files, scheme, learn_name);
    if (pi->parsed()) return cmd_pipeline(g);
    if (be->parsed()) return cmd_benchmark(g, bench_instances, abk_path);
    if (st->parsed()) return cmd_stats(csv_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
