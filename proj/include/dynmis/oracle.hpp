#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/graph.hpp"
#include "dynmis/trials.hpp"

namespace dynmis {

/// IN/OUT membership of every visible node.
struct MisAssignment {
  std::map<NodeId, bool> in_mis;

  bool in(NodeId v) const {
    auto it = in_mis.find(v);
    return it != in_mis.end() && it->second;
  }
  /// Number of IN nodes.
  std::size_t size() const;
  std::vector<NodeId> members() const;

  friend bool operator==(const MisAssignment&, const MisAssignment&) = default;
};

/// Sequential random greedy: visit visible nodes by increasing order, take a
/// node unless an earlier neighbor was taken.
MisAssignment greedy_mis(const Graph& g, const Ordering& order);
MisAssignment greedy_mis(const Graph& g, const PriorityMap& p);

/// True iff every visible node is IN exactly when no lower-priority neighbor is
/// IN. Throws GraphError if the assignment misses a visible node.
bool check_invariant(const Graph& g, const PriorityMap& p, const MisAssignment& a);

/// Nodes influenced by a topology change, with their last wave index.
///
/// waves[i] lists S_i; level[u] is the largest i with u in S_i, so v_star has
/// level 0. Empty when v_star still satisfies the invariant after the change
/// (invariant_held is then true).
struct InfluencedSet {
  std::map<NodeId, int> level;
  std::vector<std::vector<NodeId>> waves;
  bool invariant_held = false;

  std::size_t size() const { return level.size(); }
  bool empty() const { return level.empty(); }
  bool contains(NodeId v) const { return level.count(v) != 0; }
  std::vector<NodeId> members() const;
  bool in_wave(NodeId v, std::size_t i) const;
};

/// The wave recursion seeded with {seed}: u joins wave i when some lower
/// neighbor is in wave i-1 and either u is IN, or u is OUT and every IN lower
/// neighbor already joined an earlier wave. Nodes absent from `states` count
/// as OUT.
InfluencedSet influence_recursion(const Graph& g, const Ordering& order, const MisAssignment& states,
                                  NodeId seed);

/// True iff v_star's invariant is broken right after c. `old_states` are the
/// stable states on g_old; an arriving node starts OUT and a deleted node is
/// broken iff it was IN.
bool locus_violated(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c,
                    const MisAssignment& old_states);

/// Influenced set S of a change. The recursion runs on g_new, except for node
/// deletion, where it runs on g_old with the deleted node as the seed.
/// Throws InvariantViolation if old_states is not the greedy MIS of g_old.
InfluencedSet influenced_set(const Graph& g_old, const Graph& g_new, const PriorityMap& p,
                             const TopologyChange& c);
InfluencedSet influenced_set(const Graph& g_old, const Graph& g_new, const PriorityMap& p,
                             const TopologyChange& c, const MisAssignment& old_states);

/// The set S' built with `v_star` forced first in the order, on g_old for node
/// deletion and edge insertion and on g_new otherwise, with the states of the
/// greedy MIS under that order. Never empty. `v_star` is a parameter so that
/// callers can seed it with a node chosen independently of the priorities.
InfluencedSet s_prime(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c,
                      NodeId v_star);

using Rng = std::mt19937_64;
using GraphFamily = std::function<Graph(Rng&)>;
using ChangeFamily = std::function<TopologyChange(const Graph&, Rng&)>;

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t trials = 0;
};

/// Monte-Carlo estimate of E[|S|]. Trial t draws its topology from a stream
/// independent of its priority seed, so the change never depends on the order.
Estimate mean_influence_estimate(const GraphFamily& graphs, const ChangeFamily& changes, std::size_t trials,
                                 std::uint64_t seed, Execution exec = Execution::Parallel);

/// Largest visible-node count accepted by brute_force_cc_opt.
inline constexpr std::size_t kMaxBruteForceNodes = 12;

/// Minimum correlation-clustering cost over all partitions of the visible
/// nodes (restricted-growth-string enumeration). Throws GraphError above
/// kMaxBruteForceNodes nodes.
std::uint64_t brute_force_cc_opt(const Graph& g);
/// Same value; the partition space is split by prefix across OpenMP threads.
std::uint64_t brute_force_cc_opt_parallel(const Graph& g);

}  // namespace dynmis
