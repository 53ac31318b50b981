#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dynmis/graph.hpp"

namespace dynmis {

/// Visitor built from lambdas, for std::visit over TopologyChange.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct EdgeInsert {
  NodeId u, v;
  friend bool operator==(const EdgeInsert&, const EdgeInsert&) = default;
};
struct EdgeDeleteGraceful {
  NodeId u, v;
  friend bool operator==(const EdgeDeleteGraceful&, const EdgeDeleteGraceful&) = default;
};
struct EdgeDeleteAbrupt {
  NodeId u, v;
  friend bool operator==(const EdgeDeleteAbrupt&, const EdgeDeleteAbrupt&) = default;
};
struct NodeInsert {
  NodeId v;
  std::vector<NodeId> neighbors;
  friend bool operator==(const NodeInsert&, const NodeInsert&) = default;
};
struct NodeDeleteGraceful {
  NodeId v;
  friend bool operator==(const NodeDeleteGraceful&, const NodeDeleteGraceful&) = default;
};
struct NodeDeleteAbrupt {
  NodeId v;
  friend bool operator==(const NodeDeleteAbrupt&, const NodeDeleteAbrupt&) = default;
};
struct NodeUnmute {
  NodeId v;
  friend bool operator==(const NodeUnmute&, const NodeUnmute&) = default;
};

using TopologyChange = std::variant<EdgeInsert, EdgeDeleteGraceful, EdgeDeleteAbrupt, NodeInsert,
                                    NodeDeleteGraceful, NodeDeleteAbrupt, NodeUnmute>;

enum class ChangeType {
  EdgeInsert,
  EdgeDeleteGraceful,
  EdgeDeleteAbrupt,
  NodeInsert,
  NodeDeleteGraceful,
  NodeDeleteAbrupt,
  NodeUnmute,
};

inline constexpr ChangeType kAllChangeTypes[] = {
    ChangeType::EdgeInsert,         ChangeType::EdgeDeleteGraceful, ChangeType::EdgeDeleteAbrupt,
    ChangeType::NodeInsert,         ChangeType::NodeDeleteGraceful, ChangeType::NodeDeleteAbrupt,
    ChangeType::NodeUnmute,
};

ChangeType type_of(const TopologyChange& c);
/// Scenario-file spelling, e.g. "edge_insert".
std::string_view to_string(ChangeType t);
std::optional<ChangeType> parse_change_type(std::string_view s);
std::string describe(const TopologyChange& c);

inline bool is_edge_change(ChangeType t) {
  return t == ChangeType::EdgeInsert || t == ChangeType::EdgeDeleteGraceful ||
         t == ChangeType::EdgeDeleteAbrupt;
}
inline bool is_node_deletion(ChangeType t) {
  return t == ChangeType::NodeDeleteGraceful || t == ChangeType::NodeDeleteAbrupt;
}
inline bool is_node_arrival(ChangeType t) {
  return t == ChangeType::NodeInsert || t == ChangeType::NodeUnmute;
}

/// Throws GraphError when c does not fit g: missing or muted endpoints,
/// duplicate edges or nodes, reused ids, unmuting a visible node, or any
/// change to the incident edges of a muted node.
void validate_change(const Graph& g, const TopologyChange& c);

/// Applies the topology part of c in place (after validation). Graceful and
/// abrupt variants produce the same topology.
void apply_change_in_place(Graph& g, const TopologyChange& c);

/// Returns the post-change graph.
Graph apply_change(Graph g, const TopologyChange& c);

/// The change undoing c on the graph it was applied to, when one exists
/// under the no-id-reuse rule (edge changes and node insertion).
std::optional<TopologyChange> inverse(const Graph& before, const TopologyChange& c);

/// The node whose invariant may break (v_star) and the other endpoint of a
/// changed edge (v_star_star; equal to v_star for node changes).
struct Locus {
  NodeId v_star;
  NodeId v_star_star;
  friend bool operator==(const Locus&, const Locus&) = default;
};

Locus locus(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c);
Locus locus(const PriorityMap& p, const TopologyChange& c);

}  // namespace dynmis
