#include "dynmis/instances.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dynmis {

namespace {

// Bit index of pair (i, j), i < j, in the upper-triangle edge mask.
std::vector<std::vector<int>> pair_bits(std::size_t n) {
  std::vector<std::vector<int>> bit(n, std::vector<int>(n, -1));
  int b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) bit[i][j] = bit[j][i] = b++;
  }
  return bit;
}

Graph from_mask(std::size_t n, std::uint32_t mask, const std::vector<std::vector<int>>& bit) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(node_id(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mask >> bit[i][j] & 1u) g.add_edge(node_id(i), node_id(j));
    }
  }
  return g;
}

}  // namespace

std::vector<Graph> nonisomorphic_graphs(std::size_t max_n) {
  if (max_n > 7) throw std::invalid_argument("nonisomorphic_graphs: max_n must be at most 7");
  std::vector<Graph> out;
  for (std::size_t n = 0; n <= max_n; ++n) {
    const auto bit = pair_bits(n);
    const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
    std::vector<bool> seen(std::size_t{1} << pairs, false);
    std::vector<std::size_t> perm(n);
    for (std::uint32_t mask = 0; mask < seen.size(); ++mask) {
      if (seen[mask]) continue;
      out.push_back(from_mask(n, mask, bit));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::uint32_t image = 0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (mask >> bit[i][j] & 1u) image |= 1u << bit[perm[i]][perm[j]];
          }
        }
        seen[image] = true;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return out;
}

NodeId fresh_id(const Graph& g) {
  std::uint64_t next = 0;
  for (NodeId v : g.all_nodes()) next = std::max(next, raw(v) + 1);
  while (g.was_retired(node_id(next))) ++next;
  return node_id(next);
}

std::vector<ChangeInstance> change_instances(const Graph& g, ChangeType t) {
  std::vector<ChangeInstance> out;
  const std::vector<NodeId> nodes = g.nodes();
  const std::size_t n = nodes.size();
  switch (t) {
    case ChangeType::EdgeInsert:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (!g.has_edge(nodes[i], nodes[j])) out.push_back({g, EdgeInsert{nodes[i], nodes[j]}});
        }
      }
      break;
    case ChangeType::EdgeDeleteGraceful:
      for (const auto& [u, v] : g.edges()) out.push_back({g, EdgeDeleteGraceful{u, v}});
      break;
    case ChangeType::EdgeDeleteAbrupt:
      for (const auto& [u, v] : g.edges()) out.push_back({g, EdgeDeleteAbrupt{u, v}});
      break;
    case ChangeType::NodeDeleteGraceful:
      for (NodeId v : nodes) out.push_back({g, NodeDeleteGraceful{v}});
      break;
    case ChangeType::NodeDeleteAbrupt:
      for (NodeId v : nodes) out.push_back({g, NodeDeleteAbrupt{v}});
      break;
    case ChangeType::NodeInsert:
    case ChangeType::NodeUnmute: {
      const NodeId v = fresh_id(g);
      for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
        std::vector<NodeId> nbrs;
        for (std::size_t i = 0; i < n; ++i) {
          if (subset >> i & 1u) nbrs.push_back(nodes[i]);
        }
        if (t == ChangeType::NodeInsert) {
          out.push_back({g, NodeInsert{v, std::move(nbrs)}});
        } else {
          Graph muted = g;
          muted.add_node(v, false);
          for (NodeId w : nbrs) muted.add_edge(v, w);
          out.push_back({std::move(muted), NodeUnmute{v}});
        }
      }
      break;
    }
  }
  return out;
}

Graph gnp(std::size_t n, double p, Rng& rng, std::uint64_t first) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(node_id(first + i));
  if (p <= 0.0) return g;
  if (p >= 1.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) g.add_edge(node_id(first + i), node_id(first + j));
    }
    return g;
  }
  // Pairs (w, v) with w < v in row-major order; the gap to the next edge is geometric.
  std::geometric_distribution<std::size_t> gap(p);
  std::size_t v = 1, w = 0;
  bool start = true;
  while (v < n) {
    w += gap(rng) + (start ? 0 : 1);
    start = false;
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) g.add_edge(node_id(first + w), node_id(first + v));
  }
  return g;
}

namespace {

template <class T>
const T& pick(const std::vector<T>& xs, Rng& rng) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

bool has_muted_neighbor(const Graph& g, NodeId v) {
  for (NodeId w : g.adjacency(v)) {
    if (!g.visible(w)) return true;
  }
  return false;
}

}  // namespace

std::optional<TopologyChange> random_change(const Graph& g, ChangeType t, Rng& rng, double p) {
  const std::vector<NodeId> nodes = g.nodes();
  switch (t) {
    case ChangeType::EdgeInsert: {
      const std::size_t n = nodes.size();
      if (n < 2 || g.edge_count() == n * (n - 1) / 2) return std::nullopt;
      for (;;) {
        const NodeId u = pick(nodes, rng);
        const NodeId v = pick(nodes, rng);
        if (u != v && !g.has_edge(u, v)) return EdgeInsert{u, v};
      }
    }
    case ChangeType::EdgeDeleteGraceful:
    case ChangeType::EdgeDeleteAbrupt: {
      const std::vector<Edge> edges = g.edges();
      if (edges.empty()) return std::nullopt;
      const Edge& e = pick(edges, rng);
      if (t == ChangeType::EdgeDeleteGraceful) return EdgeDeleteGraceful{e.first, e.second};
      return EdgeDeleteAbrupt{e.first, e.second};
    }
    case ChangeType::NodeInsert: {
      std::bernoulli_distribution coin(p);
      NodeInsert ins{fresh_id(g), {}};
      for (NodeId w : nodes) {
        if (coin(rng)) ins.neighbors.push_back(w);
      }
      return ins;
    }
    case ChangeType::NodeDeleteGraceful:
    case ChangeType::NodeDeleteAbrupt: {
      std::vector<NodeId> candidates;
      for (NodeId v : nodes) {
        if (!has_muted_neighbor(g, v)) candidates.push_back(v);
      }
      if (candidates.empty()) return std::nullopt;
      const NodeId v = pick(candidates, rng);
      if (t == ChangeType::NodeDeleteGraceful) return NodeDeleteGraceful{v};
      return NodeDeleteAbrupt{v};
    }
    case ChangeType::NodeUnmute: {
      std::vector<NodeId> muted;
      for (NodeId v : g.all_nodes()) {
        if (!g.visible(v)) muted.push_back(v);
      }
      if (muted.empty()) return std::nullopt;
      return NodeUnmute{pick(muted, rng)};
    }
  }
  return std::nullopt;
}

}  // namespace dynmis
