#include "dynmis/harness.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dynmis/errors.hpp"
#include "dynmis/instances.hpp"

namespace dynmis {

namespace {

struct TrialOutput {
  std::vector<ChangeRecord> records;
  Accumulator adjustments, rounds, broadcasts;
  double final_mis = 0.0;
  std::size_t max_r_exits = 0;
  std::size_t max_c_entries = 0;
};

ChangeResult apply_one(Network& net, const TopologyChange& c, const RunConfig& cfg, std::uint64_t seed,
                       std::size_t idx, bool keep_logs) {
  if (cfg.mode == Mode::Async) {
    AsyncOptions ao;
    ao.full_check = cfg.full_check;
    ao.record_outputs = false;
    return net.apply_async(c, derive_seed(seed, idx), ao);
  }
  SyncOptions so;
  so.keep_logs = keep_logs;
  so.full_check = cfg.full_check;
  so.record_outputs = false;
  return net.apply_sync(c, so);
}

// Replays a trial up to change `idx` and reruns that change with round logs,
// returning the failure message it produces.
std::string replay_failure(const Scenario& s, const RunConfig& cfg, std::size_t trial, std::size_t idx) {
  const std::uint64_t seed = trial_seed(s, cfg.seed, trial);
  Network net(s.initial_graph, PriorityMap(seed), cfg.kind);
  for (std::size_t i = 0; i < idx; ++i) apply_one(net, s.changes[i], cfg, seed, i, false);
  try {
    apply_one(net, s.changes[idx], cfg, seed, idx, true);
  } catch (const InvariantViolation& e) {
    return e.what();
  }
  return "failure did not reproduce";
}

TrialOutput run_trial(const Scenario& s, const RunConfig& cfg, std::size_t t) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(s, cfg.seed, t);
  const PriorityMap p(seed);
  Network net(s.initial_graph, p, cfg.kind);
  const bool keep_logs = static_cast<bool>(cfg.round_sink);

  for (std::size_t i = 0; i < s.changes.size(); ++i) {
    const TopologyChange& c = s.changes[i];
    std::optional<Graph> g_old;
    if (cfg.influence) g_old = net.graph();
    ChangeResult r;
    try {
      r = apply_one(net, c, cfg, seed, i, keep_logs);
    } catch (const GraphError& e) {
      throw ScenarioError("change " + std::to_string(i) + " (" + describe(c) + "): " + e.what());
    } catch (const InvariantViolation& e) {
      std::string msg = "trial " + std::to_string(t) + ", change " + std::to_string(i) + ": ";
      msg += cfg.mode == Mode::Sync && !keep_logs ? replay_failure(s, cfg, t, i) : e.what();
      throw InvariantViolation(msg);
    }
    if (keep_logs) {
      for (const RoundLog& log : r.logs) cfg.round_sink(t, i, log);
    }

    ChangeRecord rec;
    rec.trial = t;
    rec.change_idx = i;
    rec.type = type_of(c);
    rec.metrics = r.metrics;
    if (g_old) rec.s_size = static_cast<long long>(influenced_set(*g_old, net.graph(), p, c).size());

    out.adjustments.add(static_cast<double>(r.metrics.adjustments));
    out.rounds.add(static_cast<double>(r.metrics.rounds));
    out.broadcasts.add(static_cast<double>(r.metrics.broadcasts));
    out.max_r_exits = std::max(out.max_r_exits, r.metrics.max_r_exits);
    out.max_c_entries = std::max(out.max_c_entries, r.metrics.max_c_entries);
    if (cfg.keep_records) out.records.push_back(rec);
  }
  out.final_mis = static_cast<double>(net.mis_size());
  return out;
}

}  // namespace

TrialStats run_scenario(const Scenario& s, const RunConfig& cfg) {
  const Execution exec = cfg.round_sink ? Execution::Serial : cfg.exec;
  std::vector<TrialOutput> outs =
      run_trials<TrialOutput>(cfg.trials, [&](std::size_t t) { return run_trial(s, cfg, t); }, exec);

  TrialStats stats;
  stats.scenario = s.name;
  Accumulator adj, rounds, bc, mis;
  for (TrialOutput& o : outs) {
    adj.merge(o.adjustments);
    rounds.merge(o.rounds);
    bc.merge(o.broadcasts);
    mis.add(o.final_mis);
    stats.max_r_exits = std::max(stats.max_r_exits, o.max_r_exits);
    stats.max_c_entries = std::max(stats.max_c_entries, o.max_c_entries);
    stats.records.insert(stats.records.end(), o.records.begin(), o.records.end());
  }
  stats.adjustments = adj.summary();
  stats.rounds = rounds.summary();
  stats.broadcasts = bc.summary();
  stats.final_mis_size = mis.summary();
  return stats;
}

void write_csv_header(std::ostream& out) {
  out << "scenario,trial,change_idx,change_type,adjustments,rounds,broadcasts,S_size\n";
}

void write_csv_rows(std::ostream& out, const TrialStats& stats) {
  for (const ChangeRecord& r : stats.records) {
    out << stats.scenario << ',' << r.trial << ',' << r.change_idx << ',' << to_string(r.type) << ','
        << r.metrics.adjustments << ',' << r.metrics.rounds << ',' << r.metrics.broadcasts << ',';
    if (r.s_size >= 0) out << r.s_size;
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const TrialStats& stats) {
  out << "scenario,metric,count,mean,std_err,max\n";
  auto row = [&](const char* name, const Summary& s) {
    out << stats.scenario << ',' << name << ',' << s.count << ',' << s.mean << ',' << s.std_err << ',' << s.max
        << '\n';
  };
  row("adjustments", stats.adjustments);
  row("rounds", stats.rounds);
  row("broadcasts", stats.broadcasts);
  row("final_mis_size", stats.final_mis_size);
}

TrialStats summarize_records(const std::string& scenario, const std::vector<ChangeRecord>& records) {
  TrialStats stats;
  stats.scenario = scenario;
  stats.records = records;
  std::vector<double> adj, rounds, bc;
  for (const ChangeRecord& r : records) {
    adj.push_back(static_cast<double>(r.metrics.adjustments));
    rounds.push_back(static_cast<double>(r.metrics.rounds));
    bc.push_back(static_cast<double>(r.metrics.broadcasts));
    stats.max_r_exits = std::max(stats.max_r_exits, r.metrics.max_r_exits);
    stats.max_c_entries = std::max(stats.max_c_entries, r.metrics.max_c_entries);
  }
  stats.adjustments = summarize(adj);
  stats.rounds = summarize(rounds);
  stats.broadcasts = summarize(bc);
  return stats;
}

MisAssignment deterministic_baseline(const Graph& g, const TopologyChange& c) {
  return greedy_mis(apply_change(g, c), PriorityMap::identity());
}

std::vector<std::size_t> deterministic_adjustments(const Scenario& s, ProtocolKind kind) {
  Network net(s.initial_graph, PriorityMap::identity(), kind);
  std::vector<std::size_t> out;
  SyncOptions so;
  so.record_outputs = false;
  for (const TopologyChange& c : s.changes) out.push_back(net.apply_sync(c, so).metrics.adjustments);
  return out;
}

std::vector<TopologyChange> random_construction(const Graph& target, Rng& rng) {
  for (NodeId v : target.all_nodes()) {
    if (!target.visible(v)) throw ScenarioError("random_construction: target has a muted node");
  }
  std::vector<NodeId> order = target.nodes();
  std::shuffle(order.begin(), order.end(), rng);
  std::uint64_t next_temp = raw(fresh_id(target));

  Graph cur;
  std::vector<TopologyChange> seq;
  std::vector<Edge> pending;  // target edges not inserted yet
  std::vector<Edge> extra;    // non-target edges currently present
  std::vector<NodeId> temps;  // temporary nodes currently present
  std::vector<NodeId> present;
  std::bernoulli_distribution half(0.5), some(0.3), rare(0.15);

  auto emit = [&](TopologyChange c) {
    apply_change_in_place(cur, c);
    seq.push_back(std::move(c));
  };
  auto take = [&](auto& xs) {
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng);
    auto x = xs[i];
    xs[i] = xs.back();
    xs.pop_back();
    return x;
  };
  auto remove_extra_edge = [&] {
    const Edge e = take(extra);
    if (half(rng)) {
      emit(EdgeDeleteGraceful{e.first, e.second});
    } else {
      emit(EdgeDeleteAbrupt{e.first, e.second});
    }
  };
  auto remove_temp = [&] {
    const NodeId v = take(temps);
    // Extra edges never touch temporary nodes, so only the node goes.
    if (half(rng)) {
      emit(NodeDeleteGraceful{v});
    } else {
      emit(NodeDeleteAbrupt{v});
    }
  };
  auto detour = [&] {
    if (present.size() >= 2 && some(rng)) {
      std::uniform_int_distribution<std::size_t> pick(0, present.size() - 1);
      const NodeId u = present[pick(rng)];
      const NodeId w = present[pick(rng)];
      if (u != w && !cur.has_edge(u, w) && !target.has_edge(u, w)) {
        emit(EdgeInsert{u, w});
        extra.push_back(make_edge(u, w));
      }
    }
    if (rare(rng)) {
      NodeInsert ins{node_id(next_temp++), {}};
      for (NodeId w : present) {
        if (some(rng)) ins.neighbors.push_back(w);
      }
      emit(ins);
      temps.push_back(ins.v);
    }
    if (!extra.empty() && some(rng)) remove_extra_edge();
    if (!temps.empty() && some(rng)) remove_temp();
  };

  for (NodeId v : order) {
    NodeInsert ins{v, {}};
    for (NodeId w : target.neighbors(v)) {
      if (std::find(present.begin(), present.end(), w) == present.end()) continue;
      if (half(rng)) {
        ins.neighbors.push_back(w);
      } else {
        pending.push_back(make_edge(v, w));
      }
    }
    emit(ins);
    present.push_back(v);
    for (std::size_t i = 0; i < pending.size();) {
      if (some(rng)) {
        emit(EdgeInsert{pending[i].first, pending[i].second});
        pending[i] = pending.back();
        pending.pop_back();
      } else {
        ++i;
      }
    }
    detour();
  }
  std::shuffle(pending.begin(), pending.end(), rng);
  for (const Edge& e : pending) {
    emit(EdgeInsert{e.first, e.second});
    if (!extra.empty() && half(rng)) remove_extra_edge();
  }
  while (!extra.empty() || !temps.empty()) {
    if (!extra.empty() && (temps.empty() || half(rng))) {
      remove_extra_edge();
    } else {
      remove_temp();
    }
  }
  return seq;
}

HistoryReport history_independence_demo(const Graph& target, const std::vector<std::vector<TopologyChange>>& sequences,
                                        const std::vector<std::uint64_t>& seeds, ProtocolKind kind, Execution exec) {
  struct PerSeed {
    std::size_t mismatches = 0;
    std::optional<std::size_t> first;
  };
  SyncOptions so;
  so.record_outputs = false;
  std::vector<PerSeed> per = run_trials<PerSeed>(
      seeds.size(),
      [&](std::size_t si) {
        PerSeed r;
        const PriorityMap p(seeds[si]);
        const MisAssignment want = greedy_mis(target, p);
        for (std::size_t q = 0; q < sequences.size(); ++q) {
          Network net(Graph{}, p, kind);
          for (const TopologyChange& c : sequences[q]) net.apply_sync(c, so);
          if (!(net.graph() == target)) {
            throw ScenarioError("construction sequence " + std::to_string(q) + " does not produce the target graph");
          }
          if (!(net.outputs() == want)) {
            ++r.mismatches;
            if (!r.first) r.first = q;
          }
        }
        return r;
      },
      exec);

  HistoryReport report;
  report.constructions = seeds.size() * sequences.size();
  for (std::size_t si = 0; si < per.size(); ++si) {
    report.mismatches += per[si].mismatches;
    if (!report.first_mismatch && per[si].first) report.first_mismatch = std::pair{si, *per[si].first};
  }
  return report;
}

std::vector<HistoryTarget> history_independence_sweep(std::size_t targets, std::size_t sequences, std::size_t seeds,
                                                      std::uint64_t seed, ProtocolKind kind, Execution exec) {
  std::vector<std::uint64_t> priority_seeds;
  for (std::size_t j = 0; j < seeds; ++j) priority_seeds.push_back(derive_seed(seed, j));
  std::vector<HistoryTarget> out;
  for (std::size_t i = 0; i < targets; ++i) {
    Rng rng(derive_seed(~seed, i));
    HistoryTarget h;
    h.target = gnp(8, 0.3, rng);
    std::vector<std::vector<TopologyChange>> seqs;
    for (std::size_t q = 0; q < sequences; ++q) seqs.push_back(random_construction(h.target, rng));
    h.report = history_independence_demo(h.target, seqs, priority_seeds, kind, exec);
    out.push_back(std::move(h));
  }
  return out;
}

Summary star_mis_size(std::size_t n, std::size_t trials, std::uint64_t seed, ProtocolKind kind, Execution exec) {
  const Scenario s = star_scenario(n);
  SyncOptions so;
  so.record_outputs = false;
  const std::vector<double> sizes = run_trials<double>(
      trials,
      [&](std::size_t t) {
        Network net(s.initial_graph, PriorityMap(seed + t), kind);
        for (const TopologyChange& c : s.changes) net.apply_sync(c, so);
        return static_cast<double>(net.mis_size());
      },
      exec);
  return summarize(sizes);
}

MatchingStats three_paths_matching(std::size_t paths, std::size_t trials, std::uint64_t seed, Execution exec) {
  const Graph g = final_graph(three_paths_scenario(paths));
  const LineGraph lg = line_graph(g);
  struct One {
    double size = 0;
    bool valid = true;
  };
  const std::vector<One> res = run_trials<One>(
      trials,
      [&](std::size_t t) {
        const MisAssignment mis = greedy_mis(lg.graph, PriorityMap(seed + t));
        std::vector<Edge> m;
        for (NodeId e : mis.members()) m.push_back(lg.edge_of.at(e));
        return One{static_cast<double>(m.size()), is_maximal_matching(g, m)};
      },
      exec);
  MatchingStats out;
  std::vector<double> sizes;
  for (const One& o : res) {
    sizes.push_back(o.size);
    out.invalid += !o.valid;
  }
  out.size = summarize(sizes);
  return out;
}

std::size_t three_paths_dynamic_mismatches(std::size_t paths, std::size_t trials, std::uint64_t seed,
                                           ProtocolKind kind) {
  const Scenario s = three_paths_scenario(paths);
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    DynamicMatching dm(s.initial_graph, seed + t, kind);
    for (const TopologyChange& c : s.changes) {
      dm.apply(c);
      const Graph& g = dm.graph();
      const LineGraph lg = line_graph(g);
      PriorityMap p_static(0);
      for (const auto& [node, edge] : lg.edge_of) {
        p_static.set_draw(node, dm.line_network().priorities().at(dm.edge_node(edge)).draw);
      }
      const std::vector<Edge> m = dm.matching();
      if (m != matching_via_line_graph(g, p_static) || !is_maximal_matching(g, m)) ++mismatches;
    }
  }
  return mismatches;
}

SeparationStats bipartite_separation(std::size_t k, std::size_t trials, std::uint64_t seed, ProtocolKind kind,
                                     Execution exec) {
  const Scenario s = bipartite_kk_scenario(k);
  const std::size_t start = bipartite_deletion_start(k);
  SeparationStats out;
  const std::vector<std::size_t> det = deterministic_adjustments(s, kind);
  out.deterministic.assign(det.begin() + static_cast<std::ptrdiff_t>(start), det.end());

  SyncOptions so;
  so.record_outputs = false;
  const std::vector<std::vector<double>> per_trial = run_trials<std::vector<double>>(
      trials,
      [&](std::size_t t) {
        Network net(s.initial_graph, PriorityMap(seed + t), kind);
        std::vector<double> adj;
        for (std::size_t i = 0; i < s.changes.size(); ++i) {
          const ChangeResult r = net.apply_sync(s.changes[i], so);
          if (i >= start) adj.push_back(static_cast<double>(r.metrics.adjustments));
        }
        return adj;
      },
      exec);
  Accumulator per_deletion, totals;
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    double total = 0;
    for (double a : per_trial[t]) {
      per_deletion.add(a);
      total += a;
    }
    totals.add(total);
    out.randomized_total_min = t == 0 ? total : std::min(out.randomized_total_min, total);
  }
  out.randomized_per_deletion = per_deletion.summary();
  out.randomized_total = totals.summary();
  return out;
}

std::vector<ChangeSample> single_change_samples(std::size_t n, double p, ChangeType t, std::size_t trials,
                                                std::uint64_t seed, ProtocolKind kind, Execution exec) {
  SyncOptions so;
  so.record_outputs = false;
  return run_trials<ChangeSample>(
      trials,
      [&](std::size_t i) {
        Rng topo(derive_seed(seed, 2 * i));
        Graph g_old;
        std::optional<TopologyChange> c;
        for (int attempt = 0; !c; ++attempt) {
          if (attempt == 100) throw ScenarioError("no " + std::string(to_string(t)) + " change fits G(n, p)");
          g_old = gnp(n, p, topo);
          if (t == ChangeType::NodeUnmute) {
            const NodeId v = fresh_id(g_old);
            const std::vector<NodeId> visible = g_old.nodes();
            g_old.add_node(v, false);
            std::bernoulli_distribution coin(p);
            for (NodeId w : visible) {
              if (coin(topo)) g_old.add_edge(v, w);
            }
          }
          c = random_change(g_old, t, topo, p);
        }
        const PriorityMap pri(derive_seed(seed, 2 * i + 1));
        Network net(g_old, pri, kind);
        ChangeSample out;
        out.metrics = net.apply_sync(*c, so).metrics;
        const Graph& g_new = net.graph();
        out.s_size = influenced_set(g_old, g_new, pri, *c).size();
        const NodeId v_star = locus(g_old, g_new, pri, *c).v_star;
        out.locus_degree = g_new.contains(v_star) ? g_new.degree(v_star) : g_old.degree(v_star);
        return out;
      },
      exec);
}

std::vector<ApproxRow> clustering_approx(std::size_t graphs, std::size_t max_n, std::size_t trials,
                                         std::uint64_t seed, Execution exec) {
  Rng rng(seed);
  std::vector<ApproxRow> rows;
  for (std::size_t i = 0; i < graphs; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
    const double density = std::uniform_real_distribution<double>(0.15, 0.85)(rng);
    ApproxRow row;
    row.graph = gnp(n, density, rng);
    row.opt = brute_force_cc_opt_parallel(row.graph);
    const std::vector<double> costs = run_trials<double>(
        trials,
        [&](std::size_t t) {
          const PriorityMap p(derive_seed(seed, i * trials + t));
          const MisAssignment mis = greedy_mis(row.graph, p);
          return static_cast<double>(cc_cost(row.graph, cluster_from_mis(row.graph, p, mis)));
        },
        exec);
    row.cost = summarize(costs);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dynmis
