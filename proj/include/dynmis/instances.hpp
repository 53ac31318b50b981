#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/graph.hpp"
#include "dynmis/oracle.hpp"

namespace dynmis {

/// One representative of every isomorphism class of simple graphs on
/// 0..max_n nodes, labelled 0..n-1. max_n ≤ 7.
std::vector<Graph> nonisomorphic_graphs(std::size_t max_n);

struct ChangeInstance {
  Graph g_old;
  TopologyChange change;
};

/// Every change of type t applicable to g. Node insertion adds a fresh node
/// with each possible neighbor subset; unmuting does the same with the node
/// present but muted in g_old.
std::vector<ChangeInstance> change_instances(const Graph& g, ChangeType t);

/// Smallest id larger than every id g has ever held.
NodeId fresh_id(const Graph& g);

/// G(n, p) on ids first..first+n-1.
Graph gnp(std::size_t n, double p, Rng& rng, std::uint64_t first = 0);

/// A uniformly chosen valid change of type t, or nullopt if none exists.
/// A new node connects to each visible node independently with probability p.
/// Edges of muted nodes are never touched.
std::optional<TopologyChange> random_change(const Graph& g, ChangeType t, Rng& rng, double p = 0.1);

}  // namespace dynmis
