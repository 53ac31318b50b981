// Command-line front end: run scenario files, sweep generators, run demos.
//
// Exit codes: 0 success, 1 invariant violation, 2 malformed input.

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynmis/errors.hpp"
#include "dynmis/harness.hpp"
#include "dynmis/scenario.hpp"

namespace {

using namespace dynmis;

constexpr int kExitInvariant = 1;
constexpr int kExitInput = 2;

struct CommonOptions {
  std::string protocol = "four-state";
  std::string mode = "sync";
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string debug_rounds;
  std::string summary;
  bool full_check = false;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--protocol", o.protocol, "template | four-state")
      ->check(CLI::IsMember({"template", "four-state"}))
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "sync | async (async needs template)")
      ->check(CLI::IsMember({"sync", "async"}))
      ->capture_default_str();
  cmd->add_option("--trials", o.trials, "independent priority draws")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed; trial t uses seed + t")->capture_default_str();
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_flag("--serial", o.serial, "run trials on one thread");
}

ProtocolKind protocol_of(const CommonOptions& o) {
  return o.protocol == "template" ? ProtocolKind::Template : ProtocolKind::FourState;
}

Execution exec_of(const CommonOptions& o) { return o.serial ? Execution::Serial : Execution::Parallel; }

// Owns an output file or falls back to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ScenarioError("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

RunConfig config_of(const CommonOptions& o, std::ofstream* debug) {
  RunConfig cfg;
  cfg.kind = protocol_of(o);
  cfg.mode = o.mode == "async" ? Mode::Async : Mode::Sync;
  if (cfg.mode == Mode::Async && cfg.kind != ProtocolKind::Template) {
    throw ScenarioError("--mode async requires --protocol template");
  }
  if (cfg.mode == Mode::Async && debug) throw ScenarioError("--debug-rounds is available in sync mode only");
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.full_check = o.full_check;
  cfg.exec = exec_of(o);
  if (debug) {
    cfg.round_sink = [debug](std::size_t trial, std::size_t idx, const RoundLog& log) {
      nlohmann::json j = nlohmann::json::parse(log.to_json_line());
      j["trial"] = trial;
      j["change_idx"] = idx;
      *debug << j.dump() << '\n';
    };
  }
  return cfg;
}

void report(const TrialStats& st) {
  std::cerr << st.scenario << ": adjustments " << st.adjustments.mean << " ± " << st.adjustments.std_err
            << ", rounds " << st.rounds.mean << ", broadcasts " << st.broadcasts.mean << ", final MIS "
            << st.final_mis_size.mean << '\n';
}

void run_and_write(const std::vector<Scenario>& scenarios, const CommonOptions& o) {
  std::unique_ptr<std::ofstream> debug;
  if (!o.debug_rounds.empty()) {
    debug = std::make_unique<std::ofstream>(o.debug_rounds);
    if (!*debug) throw ScenarioError("cannot open " + o.debug_rounds);
  }
  const RunConfig cfg = config_of(o, debug.get());
  Output out(o.out);
  std::unique_ptr<Output> summary;
  if (!o.summary.empty()) summary = std::make_unique<Output>(o.summary);
  write_csv_header(out.stream());
  bool summary_header = false;
  for (const Scenario& s : scenarios) {
    const TrialStats st = run_scenario(s, cfg);
    write_csv_rows(out.stream(), st);
    if (summary) {
      std::ostringstream rows;
      write_summary_csv(rows, st);
      std::string text = rows.str();
      if (summary_header) text.erase(0, text.find('\n') + 1);
      summary->stream() << text;
      summary_header = true;
    }
    report(st);
  }
}

// "n=50,100,200" -> ("n", {"50", "100", "200"})
std::pair<std::string, std::vector<std::string>> parse_param(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw ScenarioError("--param expects key=value[,value...], got \"" + arg + "\"");
  }
  std::vector<std::string> values;
  std::stringstream ss(arg.substr(eq + 1));
  for (std::string v; std::getline(ss, v, ',');) {
    if (v.empty()) throw ScenarioError("empty value in --param \"" + arg + "\"");
    values.push_back(v);
  }
  return {arg.substr(0, eq), values};
}

std::vector<std::map<std::string, std::string>> grid(const std::vector<std::string>& args) {
  std::vector<std::map<std::string, std::string>> points(1);
  for (const std::string& arg : args) {
    auto [key, values] = parse_param(arg);
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& point : points) {
      for (const std::string& v : values) {
        auto p = point;
        p[key] = v;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

struct DemoOptions {
  CommonOptions common;
  std::string name;
  std::size_t size = 0;
  std::size_t graphs = 50;
  std::size_t sequences = 100;
  std::size_t seeds = 100;
};

void demo_star(const DemoOptions& d, std::ostream& out) {
  const std::size_t n = d.size ? d.size : 100;
  const Summary s = star_mis_size(n, d.common.trials, d.common.seed, protocol_of(d.common), exec_of(d.common));
  const double want = star_expected_mis(n);
  out << "n,trials,mean_mis,std_err,expected,z\n"
      << n << ',' << s.count << ',' << s.mean << ',' << s.std_err << ',' << want << ','
      << (s.std_err > 0 ? (s.mean - want) / s.std_err : 0.0) << '\n';
}

void demo_three_paths(const DemoOptions& d, std::ostream& out) {
  const std::size_t paths = d.size ? d.size : 500;
  const MatchingStats m = three_paths_matching(paths, d.common.trials, d.common.seed, exec_of(d.common));
  const double n = 4.0 * static_cast<double>(paths);
  const double want = 5.0 * n / 12.0;
  const std::size_t dyn = three_paths_dynamic_mismatches(std::min<std::size_t>(paths, 50), 2, d.common.seed,
                                                         protocol_of(d.common));
  out << "n,trials,mean_matching,std_err,expected,relative_error,non_maximal,dynamic_mismatches\n"
      << n << ',' << m.size.count << ',' << m.size.mean << ',' << m.size.std_err << ',' << want << ','
      << std::abs(m.size.mean - want) / want << ',' << m.invalid << ',' << dyn << '\n';
}

void demo_bipartite(const DemoOptions& d, std::ostream& out) {
  const std::size_t k = d.size ? d.size : 20;
  const SeparationStats sep =
      bipartite_separation(k, d.common.trials, d.common.seed, protocol_of(d.common), exec_of(d.common));
  out << "step,deterministic_adjustments\n";
  for (std::size_t i = 0; i < sep.deterministic.size(); ++i) out << i << ',' << sep.deterministic[i] << '\n';
  out << "\nk,trials,per_deletion_mean,per_deletion_std_err,total_mean,total_std_err,total_min,deterministic_max\n"
      << k << ',' << sep.randomized_total.count << ',' << sep.randomized_per_deletion.mean << ','
      << sep.randomized_per_deletion.std_err << ',' << sep.randomized_total.mean << ','
      << sep.randomized_total.std_err << ',' << sep.randomized_total_min << ','
      << *std::max_element(sep.deterministic.begin(), sep.deterministic.end()) << '\n';
}

void demo_history(const DemoOptions& d, std::ostream& out) {
  const std::size_t targets = d.size ? d.size : 10;
  const auto rows = history_independence_sweep(targets, d.sequences, d.seeds, d.common.seed,
                                                protocol_of(d.common), exec_of(d.common));
  out << "target,nodes,edges,constructions,mismatches\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << rows[i].target.node_count() << ',' << rows[i].target.edge_count() << ','
        << rows[i].report.constructions << ',' << rows[i].report.mismatches << '\n';
  }
}

void demo_clustering(const DemoOptions& d, std::ostream& out) {
  const std::size_t max_n = d.size ? d.size : 8;
  const auto rows = clustering_approx(d.graphs, max_n, d.common.trials, d.common.seed, exec_of(d.common));
  out << "graph,nodes,edges,opt,mean_cost,std_err,ratio\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i << ',' << r.graph.node_count() << ',' << r.graph.edge_count() << ',' << r.opt << ',' << r.cost.mean
        << ',' << r.cost.std_err << ',';
    if (r.opt > 0) {
      out << r.cost.mean / static_cast<double>(r.opt);
    }
    out << '\n';
  }
}

int guarded(const std::function<void()>& body) {
  try {
    body();
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ScenarioError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const GraphError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic distributed MIS simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string scenario_file;
  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("file", scenario_file, "scenario in JSON lines")->required();
  add_common(run, run_opts);
  run->add_option("--debug-rounds", run_opts.debug_rounds, "write every round log as JSON lines to this path");
  run->add_option("--summary", run_opts.summary, "write summary CSV to this path");
  run->add_flag("--full-check", run_opts.full_check, "verify the whole graph after every change");

  CommonOptions sweep_opts;
  std::string generator;
  std::vector<std::string> params;
  auto* sweep = app.add_subcommand("sweep", "run a generator over a parameter grid");
  sweep->add_option("--generator", generator, "star | three_paths | bipartite_kk | gnp_churn")->required();
  sweep->add_option("--param", params, "key=value[,value...]; repeat for more keys");
  add_common(sweep, sweep_opts);
  sweep->add_option("--debug-rounds", sweep_opts.debug_rounds, "write every round log as JSON lines to this path");
  sweep->add_option("--summary", sweep_opts.summary, "write summary CSV to this path");
  sweep->add_flag("--full-check", sweep_opts.full_check, "verify the whole graph after every change");

  DemoOptions demo_opts;
  demo_opts.common.trials = 1000;
  auto* demo = app.add_subcommand("demo", "run a named experiment");
  demo->add_option("name", demo_opts.name, "experiment")
      ->required()
      ->check(CLI::IsMember({"star", "three-paths", "bipartite-separation", "history-independence",
                             "clustering-approx"}));
  add_common(demo, demo_opts.common);
  demo->add_option("--size", demo_opts.size,
                   "star n, three-paths paths, bipartite k, history targets, clustering max n");
  demo->add_option("--graphs", demo_opts.graphs, "clustering-approx: number of graphs")->capture_default_str();
  demo->add_option("--sequences", demo_opts.sequences, "history-independence: constructions per target")
      ->capture_default_str();
  demo->add_option("--seeds", demo_opts.seeds, "history-independence: priority seeds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*run) {
    return guarded([&] { run_and_write({load_scenario(scenario_file)}, run_opts); });
  }
  if (*sweep) {
    return guarded([&] {
      std::vector<Scenario> scenarios;
      for (const auto& point : grid(params)) scenarios.push_back(generate_scenario(generator, point, sweep_opts.seed));
      run_and_write(scenarios, sweep_opts);
    });
  }
  return guarded([&] {
    if (demo_opts.common.mode == "async") throw ScenarioError("demos run in sync mode");
    Output out(demo_opts.common.out);
    const std::string& name = demo_opts.name;
    if (name == "star") demo_star(demo_opts, out.stream());
    if (name == "three-paths") demo_three_paths(demo_opts, out.stream());
    if (name == "bipartite-separation") demo_bipartite(demo_opts, out.stream());
    if (name == "history-independence") demo_history(demo_opts, out.stream());
    if (name == "clustering-approx") demo_clustering(demo_opts, out.stream());
  });
}
