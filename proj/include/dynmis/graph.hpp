#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "dynmis/priority.hpp"

namespace dynmis {

using Edge = std::pair<NodeId, NodeId>;

/// Normalized edge key with first < second.
inline Edge make_edge(NodeId u, NodeId v) { return u < v ? Edge{u, v} : Edge{v, u}; }

/// Dynamic undirected simple graph with a per-node visibility flag.
///
/// A muted (invisible) node keeps its incident edges so that it can hear its
/// neighbors, but every neighbor query used by the protocols skips it.
class Graph {
 public:
  void add_node(NodeId v, bool visible = true);
  void add_edge(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);
  void remove_node(NodeId v);
  void set_visible(NodeId v, bool visible);

  bool contains(NodeId v) const { return vertices_.count(v) != 0; }
  bool visible(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;
  bool was_retired(NodeId v) const { return retired_.count(v) != 0; }

  /// Every incident edge, including edges to muted nodes. Sorted by id.
  std::span<const NodeId> adjacency(NodeId v) const;

  /// Visible neighbors only.
  std::vector<NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const;

  template <class F>
  void for_each_neighbor(NodeId v, F&& f) const {
    for (NodeId w : adjacency(v)) {
      if (vertices_.find(w)->second.visible) f(w);
    }
  }

  /// Visible nodes, sorted by id.
  std::vector<NodeId> nodes() const;
  /// All stored nodes including muted ones.
  std::vector<NodeId> all_nodes() const;
  std::size_t node_count() const;
  std::size_t edge_count() const;
  /// Edges between visible nodes, normalized and sorted.
  std::vector<Edge> edges() const;

  /// Topology equality: node identities, visibility and adjacency.
  friend bool operator==(const Graph& a, const Graph& b) { return a.vertices_ == b.vertices_; }

 private:
  struct Vertex {
    std::vector<NodeId> adj;
    bool visible = true;
    friend bool operator==(const Vertex&, const Vertex&) = default;
  };

  Vertex& vertex(NodeId v);
  const Vertex& vertex(NodeId v) const;

  std::size_t visible_visible_edges(const Vertex& vx) const;

  std::map<NodeId, Vertex> vertices_;
  std::set<NodeId> retired_;
  std::size_t visible_nodes_ = 0;
  std::size_t visible_edges_ = 0;
};

/// Visible neighbors of u ordered strictly before it.
std::vector<NodeId> lower_neighbors(const Graph& g, const PriorityMap& p, NodeId u);

}  // namespace dynmis
