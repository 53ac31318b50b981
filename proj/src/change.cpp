#include "dynmis/change.hpp"

#include <algorithm>
#include <set>

#include "dynmis/errors.hpp"

namespace dynmis {

namespace {

std::string id_str(NodeId v) { return std::to_string(raw(v)); }

void require_visible(const Graph& g, NodeId v) {
  if (!g.contains(v)) throw GraphError("node " + id_str(v) + " does not exist");
  if (!g.visible(v)) throw GraphError("node " + id_str(v) + " is muted");
}

void require_no_muted_neighbor(const Graph& g, NodeId v) {
  for (NodeId w : g.adjacency(v)) {
    if (!g.visible(w)) {
      throw GraphError("change at node " + id_str(v) + " would alter edges of muted node " + id_str(w));
    }
  }
}

void validate_edge_delete(const Graph& g, NodeId u, NodeId v) {
  require_visible(g, u);
  require_visible(g, v);
  if (!g.has_edge(u, v)) throw GraphError("edge " + id_str(u) + "-" + id_str(v) + " does not exist");
}

}  // namespace

ChangeType type_of(const TopologyChange& c) { return static_cast<ChangeType>(c.index()); }

std::string_view to_string(ChangeType t) {
  switch (t) {
    case ChangeType::EdgeInsert: return "edge_insert";
    case ChangeType::EdgeDeleteGraceful: return "edge_delete_graceful";
    case ChangeType::EdgeDeleteAbrupt: return "edge_delete_abrupt";
    case ChangeType::NodeInsert: return "node_insert";
    case ChangeType::NodeDeleteGraceful: return "node_delete_graceful";
    case ChangeType::NodeDeleteAbrupt: return "node_delete_abrupt";
    case ChangeType::NodeUnmute: return "node_unmute";
  }
  return "?";
}

std::optional<ChangeType> parse_change_type(std::string_view s) {
  for (ChangeType t : kAllChangeTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string describe(const TopologyChange& c) {
  return std::visit(
      overloaded{
          [](const NodeInsert& x) {
            std::string s = "node_insert(" + id_str(x.v) + ";";
            for (NodeId w : x.neighbors) s += " " + id_str(w);
            return s + ")";
          },
          [&](const auto& x) {
            std::string s(to_string(type_of(c)));
            if constexpr (requires { x.u; }) {
              return s + "(" + id_str(x.u) + "," + id_str(x.v) + ")";
            } else {
              return s + "(" + id_str(x.v) + ")";
            }
          },
      },
      c);
}

void validate_change(const Graph& g, const TopologyChange& c) {
  std::visit(overloaded{
                 [&](const EdgeInsert& x) {
                   if (x.u == x.v) throw GraphError("self-loop on node " + id_str(x.u));
                   require_visible(g, x.u);
                   require_visible(g, x.v);
                   if (g.has_edge(x.u, x.v)) {
                     throw GraphError("edge " + id_str(x.u) + "-" + id_str(x.v) + " already exists");
                   }
                 },
                 [&](const EdgeDeleteGraceful& x) { validate_edge_delete(g, x.u, x.v); },
                 [&](const EdgeDeleteAbrupt& x) { validate_edge_delete(g, x.u, x.v); },
                 [&](const NodeInsert& x) {
                   if (g.contains(x.v)) throw GraphError("node " + id_str(x.v) + " already exists");
                   if (g.was_retired(x.v)) throw GraphError("node id " + id_str(x.v) + " cannot be reused");
                   std::set<NodeId> seen;
                   for (NodeId w : x.neighbors) {
                     if (w == x.v) throw GraphError("self-loop on node " + id_str(w));
                     require_visible(g, w);
                     if (!seen.insert(w).second) throw GraphError("duplicate neighbor " + id_str(w));
                   }
                 },
                 [&](const NodeDeleteGraceful& x) {
                   require_visible(g, x.v);
                   require_no_muted_neighbor(g, x.v);
                 },
                 [&](const NodeDeleteAbrupt& x) {
                   require_visible(g, x.v);
                   require_no_muted_neighbor(g, x.v);
                 },
                 [&](const NodeUnmute& x) {
                   if (!g.contains(x.v)) throw GraphError("node " + id_str(x.v) + " does not exist");
                   if (g.visible(x.v)) throw GraphError("node " + id_str(x.v) + " is already visible");
                 },
             },
             c);
}

void apply_change_in_place(Graph& g, const TopologyChange& c) {
  validate_change(g, c);
  std::visit(overloaded{
                 [&](const EdgeInsert& x) { g.add_edge(x.u, x.v); },
                 [&](const EdgeDeleteGraceful& x) { g.remove_edge(x.u, x.v); },
                 [&](const EdgeDeleteAbrupt& x) { g.remove_edge(x.u, x.v); },
                 [&](const NodeInsert& x) {
                   g.add_node(x.v);
                   for (NodeId w : x.neighbors) g.add_edge(x.v, w);
                 },
                 [&](const NodeDeleteGraceful& x) { g.remove_node(x.v); },
                 [&](const NodeDeleteAbrupt& x) { g.remove_node(x.v); },
                 [&](const NodeUnmute& x) { g.set_visible(x.v, true); },
             },
             c);
}

Graph apply_change(Graph g, const TopologyChange& c) {
  apply_change_in_place(g, c);
  return g;
}

std::optional<TopologyChange> inverse(const Graph& before, const TopologyChange& c) {
  (void)before;
  return std::visit(overloaded{
                        [](const EdgeInsert& x) -> std::optional<TopologyChange> {
                          return EdgeDeleteGraceful{x.u, x.v};
                        },
                        [](const EdgeDeleteGraceful& x) -> std::optional<TopologyChange> {
                          return EdgeInsert{x.u, x.v};
                        },
                        [](const EdgeDeleteAbrupt& x) -> std::optional<TopologyChange> {
                          return EdgeInsert{x.u, x.v};
                        },
                        [](const NodeInsert& x) -> std::optional<TopologyChange> {
                          return NodeDeleteGraceful{x.v};
                        },
                        [](const auto&) -> std::optional<TopologyChange> { return std::nullopt; },
                    },
                    c);
}

Locus locus(const PriorityMap& p, const TopologyChange& c) {
  return std::visit(
      [&](const auto& x) -> Locus {
        if constexpr (requires { x.u; }) {
          return p.less(x.u, x.v) ? Locus{x.v, x.u} : Locus{x.u, x.v};
        } else {
          return Locus{x.v, x.v};
        }
      },
      c);
}

Locus locus(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c) {
  (void)g_new;
  validate_change(g_old, c);
  return locus(p, c);
}

}  // namespace dynmis
