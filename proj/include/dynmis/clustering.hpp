#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/engine.hpp"
#include "dynmis/graph.hpp"
#include "dynmis/oracle.hpp"

namespace dynmis {

struct Clustering {
  /// Visible node -> its cluster center (an IN node; centers map to themselves).
  std::map<NodeId, NodeId> cluster_of;

  std::size_t cluster_count() const;
  /// Clusters ordered by center id, members sorted.
  std::vector<std::vector<NodeId>> clusters() const;
};

/// Pivot clustering: every IN node is a center and every OUT node joins its
/// lowest-priority IN neighbor. Throws InvariantViolation if a node has
/// no IN neighbor while OUT.
Clustering cluster_from_mis(const Graph& g, const PriorityMap& p, const MisAssignment& a);

/// Missing intra-cluster pairs plus edges between clusters (unordered pairs).
std::uint64_t cc_cost(const Graph& g, const Clustering& cl);

/// L(g): one node per edge of g, adjacent iff the edges share an endpoint.
struct LineGraph {
  Graph graph;
  std::map<NodeId, Edge> edge_of;
  std::map<Edge, NodeId> node_of;
};

/// Edge-nodes are numbered 0..m-1 in sorted edge order.
LineGraph line_graph(const Graph& g);

/// Greedy MIS of line_graph(g) under p_edges, as a set of g's edges (sorted).
std::vector<Edge> matching_via_line_graph(const Graph& g, const PriorityMap& p_edges);

/// True iff m is a matching of g and every other edge of g shares an endpoint with it.
bool is_maximal_matching(const Graph& g, const std::vector<Edge>& m);

/// Maximal matching maintained by running the MIS protocol on the line graph.
///
/// An edge-node id is assigned when its edge is created and is never reused,
/// so its priority is fixed for the edge's lifetime. An edge-node is visible
/// iff both endpoints are. A change to g becomes a sequence of single
/// line-graph changes, each run to stability before the next: a node arrival
/// inserts or unmutes its edges one at a time, and a node deletion deletes
/// them one at a time.
class DynamicMatching {
 public:
  DynamicMatching(const Graph& g, std::uint64_t seed, ProtocolKind kind);

  /// Applies c to g; returns the results of the line-graph changes it expanded to.
  std::vector<ChangeResult> apply(const TopologyChange& c);

  const Graph& graph() const { return g_; }
  const Network& line_network() const { return net_; }
  /// Line-graph node of a current edge of g.
  NodeId edge_node(Edge e) const { return node_of_.at(e); }
  /// Matched edges of g, sorted.
  std::vector<Edge> matching() const;

 private:
  NodeId new_edge_node(Edge e);

  Graph g_;
  std::map<Edge, NodeId> node_of_;
  std::map<NodeId, Edge> edge_of_;
  std::uint64_t next_edge_node_ = 0;
  Network net_;
};

}  // namespace dynmis
