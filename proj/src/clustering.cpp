#include "dynmis/clustering.hpp"

#include <algorithm>
#include <set>

#include "dynmis/errors.hpp"

namespace dynmis {

std::size_t Clustering::cluster_count() const {
  std::set<NodeId> centers;
  for (const auto& [v, c] : cluster_of) centers.insert(c);
  return centers.size();
}

std::vector<std::vector<NodeId>> Clustering::clusters() const {
  std::map<NodeId, std::vector<NodeId>> by_center;
  for (const auto& [v, c] : cluster_of) by_center[c].push_back(v);
  std::vector<std::vector<NodeId>> out;
  out.reserve(by_center.size());
  for (auto& [c, members] : by_center) out.push_back(std::move(members));
  return out;
}

Clustering cluster_from_mis(const Graph& g, const PriorityMap& p, const MisAssignment& a) {
  Clustering cl;
  for (NodeId v : g.nodes()) {
    if (a.in(v)) {
      cl.cluster_of.emplace(v, v);
      continue;
    }
    std::optional<NodeId> pivot;
    g.for_each_neighbor(v, [&](NodeId w) {
      if (a.in(w) && (!pivot || p.less(w, *pivot))) pivot = w;
    });
    if (!pivot) throw InvariantViolation("node " + std::to_string(raw(v)) + " is OUT with no IN neighbor");
    cl.cluster_of.emplace(v, *pivot);
  }
  return cl;
}

std::uint64_t cc_cost(const Graph& g, const Clustering& cl) {
  std::map<NodeId, std::uint64_t> sizes;
  for (const auto& [v, c] : cl.cluster_of) ++sizes[c];
  std::uint64_t pairs = 0;
  for (const auto& [c, s] : sizes) pairs += s * (s - 1) / 2;

  std::uint64_t intra = 0;
  std::uint64_t edges = 0;
  for (const auto& [u, v] : g.edges()) {
    ++edges;
    if (cl.cluster_of.at(u) == cl.cluster_of.at(v)) ++intra;
  }
  return (pairs - intra) + (edges - intra);
}

LineGraph line_graph(const Graph& g) {
  LineGraph lg;
  const std::vector<Edge> edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const NodeId e = node_id(i);
    lg.graph.add_node(e);
    lg.edge_of.emplace(e, edges[i]);
    lg.node_of.emplace(edges[i], e);
  }
  for (NodeId v : g.nodes()) {
    const std::vector<NodeId> nbrs = g.neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        lg.graph.add_edge(lg.node_of.at(make_edge(v, nbrs[i])), lg.node_of.at(make_edge(v, nbrs[j])));
      }
    }
  }
  return lg;
}

std::vector<Edge> matching_via_line_graph(const Graph& g, const PriorityMap& p_edges) {
  const LineGraph lg = line_graph(g);
  const MisAssignment mis = greedy_mis(lg.graph, p_edges);
  std::vector<Edge> out;
  for (NodeId e : mis.members()) out.push_back(lg.edge_of.at(e));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_maximal_matching(const Graph& g, const std::vector<Edge>& m) {
  std::set<NodeId> covered;
  for (const auto& [u, v] : m) {
    if (!g.has_edge(u, v) || !g.visible(u) || !g.visible(v)) return false;
    if (!covered.insert(u).second || !covered.insert(v).second) return false;
  }
  for (const auto& [u, v] : g.edges()) {
    if (!covered.count(u) && !covered.count(v)) return false;
  }
  return true;
}

namespace {

Graph visible_line_graph(const Graph& g, std::map<Edge, NodeId>& node_of, std::map<NodeId, Edge>& edge_of,
                         std::uint64_t& next) {
  const LineGraph lg = line_graph(g);
  node_of = lg.node_of;
  edge_of = lg.edge_of;
  next = lg.edge_of.size();
  return lg.graph;
}

}  // namespace

DynamicMatching::DynamicMatching(const Graph& g, std::uint64_t seed, ProtocolKind kind)
    : g_(g), net_(visible_line_graph(g_, node_of_, edge_of_, next_edge_node_), PriorityMap(seed), kind) {}

NodeId DynamicMatching::new_edge_node(Edge e) {
  const NodeId id = node_id(next_edge_node_++);
  node_of_.emplace(e, id);
  edge_of_.emplace(id, e);
  return id;
}

std::vector<ChangeResult> DynamicMatching::apply(const TopologyChange& c) {
  validate_change(g_, c);
  std::vector<ChangeResult> out;

  // Edge-nodes already in the line graph that share an endpoint with (u, w).
  auto touching = [&](NodeId u, NodeId w) {
    std::vector<NodeId> nbrs;
    for (NodeId end : {u, w}) {
      for (NodeId x : g_.adjacency(end)) {
        if (auto it = node_of_.find(make_edge(end, x)); it != node_of_.end() && x != u && x != w) {
          nbrs.push_back(it->second);
        }
      }
    }
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    return nbrs;
  };
  auto insert_edge = [&](NodeId u, NodeId w) {
    std::vector<NodeId> nbrs = touching(u, w);
    const NodeId e = new_edge_node(make_edge(u, w));
    out.push_back(net_.apply_sync(NodeInsert{e, std::move(nbrs)}));
  };
  auto delete_edge = [&](NodeId u, NodeId w, bool graceful) {
    const auto it = node_of_.find(make_edge(u, w));
    const NodeId e = it->second;
    node_of_.erase(it);
    edge_of_.erase(e);
    if (graceful) {
      out.push_back(net_.apply_sync(NodeDeleteGraceful{e}));
    } else {
      out.push_back(net_.apply_sync(NodeDeleteAbrupt{e}));
    }
  };

  std::visit(overloaded{
                 [&](const EdgeInsert& x) { insert_edge(x.u, x.v); },
                 [&](const EdgeDeleteGraceful& x) { delete_edge(x.u, x.v, true); },
                 [&](const EdgeDeleteAbrupt& x) { delete_edge(x.u, x.v, false); },
                 [&](const NodeInsert& x) {
                   g_.add_node(x.v);
                   for (NodeId w : x.neighbors) {
                     insert_edge(x.v, w);
                     g_.add_edge(x.v, w);
                   }
                 },
                 [&](const NodeDeleteGraceful& x) {
                   for (NodeId w : g_.neighbors(x.v)) delete_edge(x.v, w, true);
                 },
                 [&](const NodeDeleteAbrupt& x) {
                   for (NodeId w : g_.neighbors(x.v)) delete_edge(x.v, w, false);
                 },
                 [&](const NodeUnmute& x) {
                   for (NodeId w : g_.neighbors(x.v)) insert_edge(x.v, w);
                   g_.set_visible(x.v, true);
                 },
             },
             c);

  // Node insertion already updated g_ edge by edge.
  if (!std::holds_alternative<NodeInsert>(c) && !std::holds_alternative<NodeUnmute>(c)) {
    apply_change_in_place(g_, c);
  }
  return out;
}

std::vector<Edge> DynamicMatching::matching() const {
  std::vector<Edge> out;
  for (const auto& [id, node] : net_.nodes()) {
    if (node.visible && node.state == NodeState::M) out.push_back(edge_of_.at(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynmis
