#include "dynmis/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "dynmis/errors.hpp"

namespace dynmis {

std::string RoundLog::to_json_line() const {
  nlohmann::json j;
  j["round"] = round;
  j["preamble_broadcasts"] = preamble_broadcasts;
  auto& bs = j["broadcasts"] = nlohmann::json::array();
  for (const auto& b : broadcasts) {
    bs.push_back({{"sender", raw(b.sender)}, {"state", to_string(b.state)}, {"draw", b.priority.draw}});
  }
  auto& cs = j["state_changes"] = nlohmann::json::array();
  for (const auto& s : state_changes) {
    cs.push_back({{"node", raw(s.node)}, {"from", to_string(s.from)}, {"to", to_string(s.to)}});
  }
  return j.dump();
}

namespace {

bool node_consistent(const NodeMap& nodes, const Graph& g, const PriorityMap& p, NodeId v) {
  if (!g.contains(v) || !g.visible(v)) return true;
  auto it = nodes.find(v);
  if (it == nodes.end()) return false;
  const ProtocolNode& node = it->second;
  if (!node.visible || node.departing || !is_settled(node.state)) return false;

  std::size_t visible_neighbors = 0;
  bool lower_in = false;
  bool ok = true;
  g.for_each_neighbor(v, [&](NodeId w) {
    ++visible_neighbors;
    auto nw = nodes.find(w);
    const NeighborView* seen = node.neighbor_table.find(w);
    if (nw == nodes.end() || seen == nullptr || seen->state != nw->second.state ||
        seen->priority != p.at(w)) {
      ok = false;
      return;
    }
    if (p.at(w) < p.at(v) && nw->second.state == NodeState::M) lower_in = true;
  });
  if (!ok || visible_neighbors != node.neighbor_table.size()) return false;
  return (node.state == NodeState::M) != lower_in;
}

// Per-change bookkeeping shared by both schedulers.
struct Tracker {
  std::unordered_map<NodeId, NodeState> first_output;
  std::unordered_map<NodeId, std::size_t> c_entries;
  std::unordered_map<NodeId, std::size_t> r_exits;
  std::vector<NodeId> touched;

  void record(const ProtocolNode& node, NodeState to) {
    first_output.try_emplace(node.id, node.state);
    if (to == NodeState::C) ++c_entries[node.id];
    if (node.state == NodeState::R) ++r_exits[node.id];
    touched.push_back(node.id);
  }

  void finish(const NodeMap& nodes, ChangeMetrics& m) const {
    for (const auto& [v, before] : first_output) {
      auto it = nodes.find(v);
      if (it != nodes.end() && it->second.visible && it->second.state != before) ++m.adjustments;
    }
    for (const auto& [v, k] : c_entries) m.max_c_entries = std::max(m.max_c_entries, k);
    for (const auto& [v, k] : r_exits) m.max_r_exits = std::max(m.max_r_exits, k);
  }
};

std::vector<NodeId> locus_region(const Graph& g_old, const TopologyChange& c) {
  return std::visit(overloaded{
                        [](const NodeInsert& e) {
                          std::vector<NodeId> r = e.neighbors;
                          r.push_back(e.v);
                          return r;
                        },
                        [&](const NodeUnmute& e) {
                          std::vector<NodeId> r = g_old.neighbors(e.v);
                          r.push_back(e.v);
                          return r;
                        },
                        [&](const NodeDeleteGraceful& e) {
                          std::vector<NodeId> r(g_old.adjacency(e.v).begin(), g_old.adjacency(e.v).end());
                          return r;
                        },
                        [&](const NodeDeleteAbrupt& e) {
                          std::vector<NodeId> r(g_old.adjacency(e.v).begin(), g_old.adjacency(e.v).end());
                          return r;
                        },
                        [](const auto& e) { return std::vector<NodeId>{e.u, e.v}; },
                    },
                    c);
}

}  // namespace

bool stability_check(const NodeMap& nodes, const Graph& g, const PriorityMap& p) {
  for (NodeId v : g.nodes()) {
    if (!node_consistent(nodes, g, p, v)) return false;
  }
  return true;
}

Network::Network(Graph g, PriorityMap p, ProtocolKind kind)
    : graph_(std::move(g)), priorities_(std::move(p)), kind_(kind) {
  nodes_ = stable_configuration(graph_, priorities_, kind_);
}

MisAssignment Network::outputs() const {
  MisAssignment a;
  for (NodeId v : graph_.nodes()) a.in_mis.emplace(v, nodes_.at(v).state == NodeState::M);
  return a;
}

std::size_t Network::mis_size() const {
  std::size_t k = 0;
  for (const auto& [v, node] : nodes_) k += node.visible && node.state == NodeState::M;
  return k;
}

void Network::apply_topology(const TopologyChange& c, const ChangePlan& plan) {
  // A gracefully deleted node stays in the topology until the change settles.
  if (plan.departing) return;
  apply_change_in_place(graph_, c);
}

void Network::retire(NodeId v) {
  for (NodeId w : graph_.adjacency(v)) {
    if (auto it = nodes_.find(w); it != nodes_.end()) it->second.neighbor_table.erase(v);
  }
  graph_.remove_node(v);
  nodes_.erase(v);
}

void Network::verify(const std::vector<NodeId>& touched, bool full) const {
  bool ok = true;
  if (full) {
    ok = stability_check(nodes_, graph_, priorities_);
  } else {
    std::vector<NodeId> region = touched;
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());
    for (NodeId v : region) {
      if (!node_consistent(nodes_, graph_, priorities_, v)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) throw InvariantViolation("configuration after the change is not a stable MIS");
}

ChangeResult Network::apply_sync(const TopologyChange& c, const SyncOptions& opts) {
  const std::size_t n_before = graph_.node_count();
  std::vector<NodeId> region = locus_region(graph_, c);
  const ChangePlan plan = init_change(nodes_, graph_, priorities_, c, kind_);
  apply_topology(c, plan);
  const std::size_t n = std::max(n_before, graph_.node_count());
  const std::uint32_t max_rounds = opts.max_rounds ? opts.max_rounds : static_cast<std::uint32_t>(3 * n + 10);

  ChangeResult result;
  Tracker tracker;
  std::set<NodeId> unsettled;
  std::vector<BroadcastMsg> in_flight;
  std::map<NodeId, std::vector<BroadcastMsg>> inbox;
  const std::set<NodeId> evaluators(plan.evaluators.begin(), plan.evaluators.end());
  auto fail = [&](const std::string& what) {
    std::string msg = what;
    for (const RoundLog& log : result.logs) msg += "\n" + log.to_json_line();
    throw InvariantViolation(msg);
  };

  for (std::uint32_t round = 1;; ++round) {
    if (round > max_rounds) {
      fail("no stable configuration after " + std::to_string(max_rounds) + " rounds (" + describe(c) + ")");
    }
    RoundLog log;
    log.round = round;

    inbox.clear();
    for (const BroadcastMsg& m : in_flight) {
      for (NodeId w : graph_.adjacency(m.sender)) {
        auto it = nodes_.find(w);
        if (it == nodes_.end()) continue;
        it->second.neighbor_table.upsert(m.sender, {m.priority, m.state});
        inbox[w].push_back(m);
        tracker.touched.push_back(w);
      }
    }

    std::vector<BroadcastMsg> out;
    if (round <= plan.preamble.size()) {
      for (NodeId v : plan.preamble[round - 1]) {
        const ProtocolNode& node = nodes_.at(v);
        out.push_back({v, node.priority, node.state});
      }
      log.preamble_broadcasts = out.size();
      result.metrics.preamble_broadcasts += out.size();
    }

    std::set<NodeId> reacting(unsettled);
    for (const auto& [v, msgs] : inbox) reacting.insert(v);
    const bool trigger = round == plan.trigger_round;
    if (trigger) reacting.insert(evaluators.begin(), evaluators.end());

    for (NodeId v : reacting) {
      auto it = nodes_.find(v);
      if (it == nodes_.end() || !it->second.visible) continue;
      ProtocolNode& node = it->second;
      const bool evaluating = trigger && evaluators.count(v) != 0;
      std::span<const BroadcastMsg> events;
      if (auto in = inbox.find(v); in != inbox.end()) events = in->second;

      Reaction r{node.state, std::nullopt};
      if (kind_ == ProtocolKind::Template) {
        r = template_react(node, evaluating ? Trigger::LocalChange : Trigger::NeighborStateChange);
      } else {
        if (evaluating) r = four_state_trigger(node);
        if (!r.changed(node)) r = four_state_react(node, round, events);
      }
      if (!r.changed(node)) continue;

      tracker.record(node, r.new_state);
      if (opts.keep_logs) log.state_changes.push_back({v, node.state, r.new_state});
      node.state = r.new_state;
      node.entered_C_round = node.state == NodeState::C ? std::optional<std::uint32_t>(round) : std::nullopt;
      if (is_settled(node.state)) {
        unsettled.erase(v);
      } else {
        unsettled.insert(v);
      }
      if (r.broadcast) out.push_back(*r.broadcast);
    }

    result.metrics.broadcasts += out.size();
    if (!out.empty()) result.metrics.rounds = round;
    if (opts.keep_logs) {
      log.broadcasts = out;
      result.logs.push_back(std::move(log));
    }
    in_flight = std::move(out);
    if (round >= plan.last_scheduled_round() && in_flight.empty() && unsettled.empty()) break;
  }

  if (plan.departing) {
    for (NodeId w : graph_.adjacency(*plan.departing)) tracker.touched.push_back(w);
    retire(*plan.departing);
  }
  tracker.touched.insert(tracker.touched.end(), region.begin(), region.end());
  try {
    verify(tracker.touched, opts.full_check);
  } catch (const InvariantViolation& e) {
    fail(e.what() + (" (" + describe(c) + ")"));
  }
  tracker.finish(nodes_, result.metrics);
  if (opts.record_outputs) result.final_states = outputs();
  return result;
}

ChangeResult Network::apply_async(const TopologyChange& c, std::uint64_t scheduler_seed, const AsyncOptions& opts) {
  if (kind_ != ProtocolKind::Template) {
    throw std::invalid_argument("asynchronous runs support the template protocol only");
  }
  std::vector<NodeId> region = locus_region(graph_, c);
  const ChangePlan plan = init_change(nodes_, graph_, priorities_, c, kind_);
  apply_topology(c, plan);
  const std::size_t max_events =
      opts.max_events ? opts.max_events : 64 * (graph_.node_count() + graph_.edge_count()) + 1024;

  struct Pending {
    BroadcastMsg msg;
    std::size_t depth;
  };
  using Channel = std::pair<NodeId, NodeId>;
  std::map<Channel, std::deque<Pending>> channels;
  std::vector<Channel> nonempty;
  ChangeResult result;
  Tracker tracker;

  auto send = [&](const BroadcastMsg& m, std::size_t depth) {
    ++result.metrics.broadcasts;
    result.metrics.rounds = std::max(result.metrics.rounds, depth);
    for (NodeId w : graph_.adjacency(m.sender)) {
      if (!nodes_.count(w)) continue;
      auto& q = channels[{m.sender, w}];
      if (q.empty()) nonempty.push_back({m.sender, w});
      q.push_back({m, depth});
    }
  };
  auto react = [&](ProtocolNode& node, Trigger trigger, std::size_t depth) {
    const Reaction r = template_react(node, trigger);
    if (!r.changed(node)) return;
    tracker.record(node, r.new_state);
    node.state = r.new_state;
    if (r.broadcast) send(*r.broadcast, depth);
  };

  std::vector<NodeId> evaluators = plan.evaluators;
  std::sort(evaluators.begin(), evaluators.end());
  for (NodeId v : evaluators) {
    auto it = nodes_.find(v);
    if (it != nodes_.end() && it->second.visible) react(it->second, Trigger::LocalChange, 1);
  }

  std::mt19937_64 rng(scheduler_seed);
  std::size_t events = 0;
  while (!nonempty.empty()) {
    if (++events > max_events) {
      throw InvariantViolation("no quiescence after " + std::to_string(max_events) + " deliveries (" +
                               describe(c) + ")");
    }
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, nonempty.size() - 1)(rng);
    const Channel ch = nonempty[pick];
    auto& q = channels[ch];
    const Pending p = q.front();
    q.pop_front();
    if (q.empty()) {
      nonempty[pick] = nonempty.back();
      nonempty.pop_back();
    }
    auto it = nodes_.find(ch.second);
    if (it == nodes_.end()) continue;
    ProtocolNode& node = it->second;
    node.neighbor_table.upsert(p.msg.sender, {p.msg.priority, p.msg.state});
    tracker.touched.push_back(node.id);
    if (node.visible) react(node, Trigger::NeighborStateChange, p.depth + 1);
  }

  if (plan.departing) {
    for (NodeId w : graph_.adjacency(*plan.departing)) tracker.touched.push_back(w);
    retire(*plan.departing);
  }
  tracker.touched.insert(tracker.touched.end(), region.begin(), region.end());
  verify(tracker.touched, opts.full_check);
  tracker.finish(nodes_, result.metrics);
  if (opts.record_outputs) result.final_states = outputs();
  return result;
}

ChangeResult run_sync(const Graph& g_old, const PriorityMap& p, const TopologyChange& c, ProtocolKind kind,
                      const SyncOptions& opts) {
  Network net(g_old, p, kind);
  return net.apply_sync(c, opts);
}

ChangeResult run_async(const Graph& g_old, const PriorityMap& p, const TopologyChange& c,
                       std::uint64_t scheduler_seed, const AsyncOptions& opts) {
  Network net(g_old, p, ProtocolKind::Template);
  return net.apply_async(c, scheduler_seed, opts);
}

}  // namespace dynmis
