#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "dynmis/graph.hpp"
#include "dynmis/oracle.hpp"

namespace dynmis::test {

inline NodeId id(std::uint64_t v) { return node_id(v); }

/// Nodes 0..n-1 plus the listed edges.
inline Graph make_graph(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(id(i));
  for (auto [u, v] : edges) g.add_edge(id(u), id(v));
  return g;
}

inline Graph path_graph(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(id(i));
  for (std::size_t i = 1; i < n; ++i) g.add_edge(id(i - 1), id(i));
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  Graph g = path_graph(n);
  g.add_edge(id(n - 1), id(0));
  return g;
}

/// Center 0 and leaves 1..leaves.
inline Graph star_graph(std::size_t leaves) {
  Graph g;
  g.add_node(id(0));
  for (std::size_t i = 1; i <= leaves; ++i) {
    g.add_node(id(i));
    g.add_edge(id(0), id(i));
  }
  return g;
}

inline Graph complete_graph(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(id(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(id(i), id(j));
  }
  return g;
}

/// Priorities whose draw for node i is draws[i].
inline PriorityMap priorities(std::initializer_list<std::uint64_t> draws) {
  PriorityMap p(0);
  std::uint64_t i = 0;
  for (std::uint64_t d : draws) p.set_draw(id(i++), d);
  return p;
}

inline MisAssignment assignment(std::initializer_list<std::pair<int, bool>> xs) {
  MisAssignment a;
  for (auto [v, in] : xs) a.in_mis[id(v)] = in;
  return a;
}

}  // namespace dynmis::test
