#include "dynmis/graph.hpp"

#include <algorithm>
#include <string>

#include "dynmis/errors.hpp"

namespace dynmis {

namespace {

std::string name(NodeId v) { return std::to_string(raw(v)); }

void sorted_insert(std::vector<NodeId>& xs, NodeId v) {
  xs.insert(std::lower_bound(xs.begin(), xs.end(), v), v);
}

void sorted_erase(std::vector<NodeId>& xs, NodeId v) {
  auto it = std::lower_bound(xs.begin(), xs.end(), v);
  if (it != xs.end() && *it == v) xs.erase(it);
}

}  // namespace

Graph::Vertex& Graph::vertex(NodeId v) {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw GraphError("unknown node " + name(v));
  return it->second;
}

const Graph::Vertex& Graph::vertex(NodeId v) const {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw GraphError("unknown node " + name(v));
  return it->second;
}

void Graph::add_node(NodeId v, bool visible) {
  if (contains(v)) throw GraphError("node " + name(v) + " already exists");
  if (was_retired(v)) throw GraphError("node id " + name(v) + " was used before and cannot be reused");
  vertices_.emplace(v, Vertex{{}, visible});
  visible_nodes_ += visible;
}

void Graph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw GraphError("self-loop on node " + name(u));
  Vertex& a = vertex(u);
  Vertex& b = vertex(v);
  if (std::binary_search(a.adj.begin(), a.adj.end(), v)) {
    throw GraphError("edge " + name(u) + "-" + name(v) + " already exists");
  }
  sorted_insert(a.adj, v);
  sorted_insert(b.adj, u);
  visible_edges_ += a.visible && b.visible;
}

void Graph::remove_edge(NodeId u, NodeId v) {
  Vertex& a = vertex(u);
  Vertex& b = vertex(v);
  if (!std::binary_search(a.adj.begin(), a.adj.end(), v)) {
    throw GraphError("edge " + name(u) + "-" + name(v) + " does not exist");
  }
  sorted_erase(a.adj, v);
  sorted_erase(b.adj, u);
  visible_edges_ -= a.visible && b.visible;
}

void Graph::remove_node(NodeId v) {
  Vertex& a = vertex(v);
  visible_edges_ -= visible_visible_edges(a);
  visible_nodes_ -= a.visible;
  for (NodeId w : a.adj) sorted_erase(vertices_.find(w)->second.adj, v);
  vertices_.erase(v);
  retired_.insert(v);
}

std::size_t Graph::visible_visible_edges(const Vertex& vx) const {
  if (!vx.visible) return 0;
  return static_cast<std::size_t>(std::count_if(vx.adj.begin(), vx.adj.end(), [&](NodeId w) {
    return vertices_.find(w)->second.visible;
  }));
}

void Graph::set_visible(NodeId v, bool visible) {
  Vertex& a = vertex(v);
  if (a.visible == visible) return;
  visible_edges_ -= visible_visible_edges(a);
  visible_nodes_ -= a.visible;
  a.visible = visible;
  visible_edges_ += visible_visible_edges(a);
  visible_nodes_ += a.visible;
}

bool Graph::visible(NodeId v) const { return vertex(v).visible; }

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto it = vertices_.find(u);
  if (it == vertices_.end()) return false;
  return std::binary_search(it->second.adj.begin(), it->second.adj.end(), v);
}

std::span<const NodeId> Graph::adjacency(NodeId v) const { return vertex(v).adj; }

std::vector<NodeId> Graph::neighbors(NodeId v) const {
  std::vector<NodeId> out;
  for_each_neighbor(v, [&](NodeId w) { out.push_back(w); });
  return out;
}

std::size_t Graph::degree(NodeId v) const {
  std::size_t d = 0;
  for_each_neighbor(v, [&](NodeId) { ++d; });
  return d;
}

std::vector<NodeId> Graph::nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, vx] : vertices_) {
    if (vx.visible) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> Graph::all_nodes() const {
  std::vector<NodeId> out;
  out.reserve(vertices_.size());
  for (const auto& [id, vx] : vertices_) out.push_back(id);
  return out;
}

std::size_t Graph::node_count() const { return visible_nodes_; }

std::size_t Graph::edge_count() const { return visible_edges_; }

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (const auto& [id, vx] : vertices_) {
    if (!vx.visible) continue;
    for (NodeId w : vx.adj) {
      if (id < w && vertices_.find(w)->second.visible) out.emplace_back(id, w);
    }
  }
  return out;
}

std::vector<NodeId> lower_neighbors(const Graph& g, const PriorityMap& p, NodeId u) {
  if (!g.contains(u)) throw GraphError("unknown node " + std::to_string(raw(u)));
  const Priority pu = p.at(u);
  std::vector<NodeId> out;
  g.for_each_neighbor(u, [&](NodeId w) {
    if (p.at(w) < pu) out.push_back(w);
  });
  return out;
}

}  // namespace dynmis
