#include "dynmis/protocol.hpp"

#include <algorithm>
#include <unordered_map>

#include "dynmis/errors.hpp"

namespace dynmis {

std::string_view to_string(NodeState s) {
  switch (s) {
    case NodeState::M: return "M";
    case NodeState::NotM: return "NOT_M";
    case NodeState::C: return "C";
    case NodeState::R: return "R";
  }
  return "?";
}

std::string_view to_string(ProtocolKind k) {
  return k == ProtocolKind::Template ? "template" : "four-state";
}

void NeighborTable::upsert(NodeId id, NeighborView view) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, NodeId key) { return e.id < key; });
  if (it != entries_.end() && it->id == id) {
    it->view = view;
  } else {
    entries_.insert(it, Entry{id, view});
  }
}

void NeighborTable::erase(NodeId id) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, NodeId key) { return e.id < key; });
  if (it != entries_.end() && it->id == id) entries_.erase(it);
}

const NeighborView* NeighborTable::find(NodeId id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, NodeId key) { return e.id < key; });
  return (it != entries_.end() && it->id == id) ? &it->view : nullptr;
}

namespace {

bool any_lower_in(const ProtocolNode& node, NodeState s) {
  for (const auto& e : node.neighbor_table) {
    if (e.view.priority < node.priority && e.view.state == s) return true;
  }
  return false;
}

Reaction move_to(const ProtocolNode& node, NodeState s) {
  return {s, BroadcastMsg{node.id, node.priority, s}};
}

Reaction stay(const ProtocolNode& node) { return {node.state, std::nullopt}; }

}  // namespace

NodeState desired_output(const ProtocolNode& node) {
  if (node.departing) return NodeState::NotM;
  return any_lower_in(node, NodeState::M) ? NodeState::NotM : NodeState::M;
}

bool invariant_violated(const ProtocolNode& node) {
  return is_settled(node.state) && node.state != desired_output(node);
}

Reaction template_react(const ProtocolNode& node, Trigger) {
  const NodeState want = desired_output(node);
  return want == node.state ? stay(node) : move_to(node, want);
}

Reaction four_state_trigger(const ProtocolNode& node) {
  return invariant_violated(node) ? move_to(node, NodeState::C) : stay(node);
}

Reaction four_state_react(const ProtocolNode& node, std::uint32_t round, std::span<const BroadcastMsg> events) {
  switch (node.state) {
    case NodeState::M:
    case NodeState::NotM: {
      const bool lower_to_c = std::any_of(events.begin(), events.end(), [&](const BroadcastMsg& m) {
        return m.state == NodeState::C && m.priority < node.priority;
      });
      if (!lower_to_c) return stay(node);
      if (node.state == NodeState::NotM && any_lower_in(node, NodeState::M)) return stay(node);
      return move_to(node, NodeState::C);
    }
    case NodeState::C: {
      if (!node.entered_C_round || round < *node.entered_C_round + 2) return stay(node);
      for (const auto& e : node.neighbor_table) {
        if (node.priority < e.view.priority && e.view.state == NodeState::C) return stay(node);
      }
      return move_to(node, NodeState::R);
    }
    case NodeState::R: {
      bool any_m = false;
      for (const auto& e : node.neighbor_table) {
        if (!(e.view.priority < node.priority)) continue;
        if (!is_settled(e.view.state)) return stay(node);
        any_m = any_m || e.view.state == NodeState::M;
      }
      return move_to(node, (any_m || node.departing) ? NodeState::NotM : NodeState::M);
    }
  }
  return stay(node);
}

NodeMap stable_configuration(const Graph& g, const PriorityMap& p, ProtocolKind kind) {
  const MisAssignment mis = greedy_mis(g, p);
  std::unordered_map<NodeId, NeighborView> views;
  views.reserve(mis.in_mis.size());
  for (const auto& [v, in] : mis.in_mis) views.emplace(v, NeighborView{p.at(v), in ? NodeState::M : NodeState::NotM});

  NodeMap nodes;
  nodes.reserve(g.node_count());
  for (NodeId v : g.all_nodes()) {
    ProtocolNode n;
    n.id = v;
    n.priority = p.at(v);
    n.visible = g.visible(v);
    n.state = mis.in(v) ? NodeState::M : NodeState::NotM;
    n.protocol_kind = kind;
    for (NodeId w : g.adjacency(v)) {
      if (auto it = views.find(w); it != views.end()) n.neighbor_table.upsert(w, it->second);
    }
    nodes.emplace(v, std::move(n));
  }
  return nodes;
}

namespace {

ProtocolNode& node_at(NodeMap& nodes, NodeId v) {
  auto it = nodes.find(v);
  if (it == nodes.end()) throw GraphError("init_change: no protocol state for node " + std::to_string(raw(v)));
  return it->second;
}

NeighborView view_of(const ProtocolNode& n) { return {n.priority, n.state}; }

}  // namespace

ChangePlan init_change(NodeMap& nodes, const Graph& g_old, const PriorityMap& p, const TopologyChange& c,
                       ProtocolKind kind) {
  validate_change(g_old, c);
  const bool four = kind == ProtocolKind::FourState;
  const NodeId v_star = locus(p, c).v_star;
  ChangePlan plan;
  plan.evaluators = {v_star};
  auto drop_edge = [&](NodeId u, NodeId v) {
    node_at(nodes, u).neighbor_table.erase(v);
    node_at(nodes, v).neighbor_table.erase(u);
  };

  std::visit(overloaded{
                 [&](const EdgeInsert& e) {
                   if (four) {
                     plan.preamble = {{e.u, e.v}};
                     plan.trigger_round = 2;
                   } else {
                     ProtocolNode& a = node_at(nodes, e.u);
                     ProtocolNode& b = node_at(nodes, e.v);
                     a.neighbor_table.upsert(b.id, view_of(b));
                     b.neighbor_table.upsert(a.id, view_of(a));
                   }
                 },
                 [&](const EdgeDeleteGraceful& e) { drop_edge(e.u, e.v); },
                 [&](const EdgeDeleteAbrupt& e) { drop_edge(e.u, e.v); },
                 [&](const NodeInsert& e) {
                   ProtocolNode n;
                   n.id = e.v;
                   n.priority = p.at(e.v);
                   n.state = NodeState::NotM;
                   n.protocol_kind = kind;
                   if (four) {
                     plan.preamble = {{e.v}, e.neighbors};
                     plan.trigger_round = 3;
                   } else {
                     for (NodeId w : e.neighbors) {
                       ProtocolNode& nw = node_at(nodes, w);
                       n.neighbor_table.upsert(w, view_of(nw));
                       nw.neighbor_table.upsert(e.v, view_of(n));
                     }
                   }
                   nodes.emplace(e.v, std::move(n));
                 },
                 [&](const NodeDeleteGraceful& e) {
                   node_at(nodes, e.v).departing = true;
                   plan.departing = e.v;
                 },
                 [&](const NodeDeleteAbrupt& e) {
                   for (NodeId w : g_old.adjacency(e.v)) node_at(nodes, w).neighbor_table.erase(e.v);
                   nodes.erase(e.v);
                   plan.removed = e.v;
                   plan.evaluators = g_old.neighbors(e.v);
                 },
                 [&](const NodeUnmute& e) {
                   ProtocolNode& n = node_at(nodes, e.v);
                   n.visible = true;
                   n.state = NodeState::NotM;
                   if (four) {
                     plan.preamble = {{e.v}};
                     plan.trigger_round = 2;
                   } else {
                     for (NodeId w : g_old.neighbors(e.v)) node_at(nodes, w).neighbor_table.upsert(e.v, view_of(n));
                   }
                 },
             },
             c);
  return plan;
}

}  // namespace dynmis
