#include "dynmis/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "dynmis/errors.hpp"
#include "dynmis/stats.hpp"

namespace dynmis {

std::size_t MisAssignment::size() const {
  return static_cast<std::size_t>(
      std::count_if(in_mis.begin(), in_mis.end(), [](const auto& kv) { return kv.second; }));
}

std::vector<NodeId> MisAssignment::members() const {
  std::vector<NodeId> out;
  for (const auto& [v, in] : in_mis) {
    if (in) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> InfluencedSet::members() const {
  std::vector<NodeId> out;
  out.reserve(level.size());
  for (const auto& [v, lvl] : level) out.push_back(v);
  return out;
}

bool InfluencedSet::in_wave(NodeId v, std::size_t i) const {
  if (i >= waves.size()) return false;
  return std::find(waves[i].begin(), waves[i].end(), v) != waves[i].end();
}

MisAssignment greedy_mis(const Graph& g, const Ordering& order) {
  const std::vector<NodeId> ids = g.nodes();
  std::vector<NodeId> by_order = ids;
  std::sort(by_order.begin(), by_order.end(), [&](NodeId a, NodeId b) { return order.less(a, b); });
  // A node is IN iff no earlier node blocked it; only IN nodes block.
  std::unordered_set<NodeId> blocked;
  std::unordered_set<NodeId> taken;
  for (NodeId u : by_order) {
    if (blocked.count(u)) continue;
    taken.insert(u);
    g.for_each_neighbor(u, [&](NodeId w) { blocked.insert(w); });
  }
  MisAssignment a;
  for (NodeId u : ids) a.in_mis.emplace_hint(a.in_mis.end(), u, taken.count(u) != 0);
  return a;
}

MisAssignment greedy_mis(const Graph& g, const PriorityMap& p) { return greedy_mis(g, Ordering(p)); }

bool check_invariant(const Graph& g, const PriorityMap& p, const MisAssignment& a) {
  // The invariant has exactly one solution, the greedy MIS.
  const MisAssignment want = greedy_mis(g, p);
  for (const auto& [u, in] : want.in_mis) {
    auto it = a.in_mis.find(u);
    if (it == a.in_mis.end()) throw GraphError("assignment misses node " + std::to_string(raw(u)));
    if (it->second != in) return false;
  }
  return true;
}

InfluencedSet influence_recursion(const Graph& g, const Ordering& order, const MisAssignment& states,
                                  NodeId seed) {
  InfluencedSet s;
  s.level.emplace(seed, 0);
  s.waves.push_back({seed});

  std::vector<NodeId> previous{seed};
  for (int i = 1; !previous.empty(); ++i) {
    std::vector<NodeId> candidates;
    for (NodeId w : previous) {
      g.for_each_neighbor(w, [&](NodeId u) {
        if (u != seed && order.less(w, u)) candidates.push_back(u);
      });
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<NodeId> wave;
    for (NodeId u : candidates) {
      bool joins = true;
      if (!states.in(u)) {
        g.for_each_neighbor(u, [&](NodeId w) {
          if (joins && order.less(w, u) && states.in(w) && !s.level.count(w)) joins = false;
        });
      }
      if (joins) wave.push_back(u);
    }
    for (NodeId u : wave) s.level[u] = i;
    if (!wave.empty()) s.waves.push_back(wave);
    previous = std::move(wave);
  }
  return s;
}

bool locus_violated(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c,
                    const MisAssignment& old_states) {
  (void)g_old;
  const ChangeType t = type_of(c);
  const NodeId v = locus(p, c).v_star;
  if (is_node_deletion(t)) return old_states.in(v);
  const Priority pv = p.at(v);
  bool lower_in = false;
  g_new.for_each_neighbor(v, [&](NodeId w) {
    if (p.at(w) < pv && old_states.in(w)) lower_in = true;
  });
  // An arriving node is not in old_states and therefore starts OUT.
  return old_states.in(v) == lower_in;
}

namespace {

InfluencedSet influenced_set_unchecked(const Graph& g_old, const Graph& g_new, const PriorityMap& p,
                                       const TopologyChange& c, const MisAssignment& old_states) {
  if (!locus_violated(g_old, g_new, p, c, old_states)) {
    InfluencedSet empty;
    empty.invariant_held = true;
    return empty;
  }
  const NodeId v_star = locus(p, c).v_star;
  const Graph& g = is_node_deletion(type_of(c)) ? g_old : g_new;
  return influence_recursion(g, Ordering(p), old_states, v_star);
}

}  // namespace

InfluencedSet influenced_set(const Graph& g_old, const Graph& g_new, const PriorityMap& p,
                             const TopologyChange& c, const MisAssignment& old_states) {
  if (!check_invariant(g_old, p, old_states)) {
    throw InvariantViolation("influenced_set: pre-change states violate the MIS invariant");
  }
  return influenced_set_unchecked(g_old, g_new, p, c, old_states);
}

InfluencedSet influenced_set(const Graph& g_old, const Graph& g_new, const PriorityMap& p,
                             const TopologyChange& c) {
  return influenced_set_unchecked(g_old, g_new, p, c, greedy_mis(g_old, p));
}

InfluencedSet s_prime(const Graph& g_old, const Graph& g_new, const PriorityMap& p, const TopologyChange& c,
                      NodeId v_star) {
  const ChangeType t = type_of(c);
  const Graph& g = (is_node_deletion(t) || t == ChangeType::EdgeInsert) ? g_old : g_new;
  if (!g.contains(v_star) || !g.visible(v_star)) {
    throw GraphError("s_prime: seed node is not part of the recursion graph");
  }
  const Ordering forced(p, v_star);
  return influence_recursion(g, forced, greedy_mis(g, forced), v_star);
}

Estimate mean_influence_estimate(const GraphFamily& graphs, const ChangeFamily& changes, std::size_t trials,
                                 std::uint64_t seed, Execution exec) {
  auto one = [&](std::size_t t) -> double {
    Rng topo(derive_seed(seed, 2 * t));
    Graph g_old = graphs(topo);
    TopologyChange c = changes(g_old, topo);
    PriorityMap p(derive_seed(seed, 2 * t + 1));
    Graph g_new = apply_change(g_old, c);
    return static_cast<double>(influenced_set(g_old, g_new, p, c).size());
  };
  const std::vector<double> sizes = run_trials<double>(trials, one, exec);
  const Summary s = summarize(sizes);
  return {s.mean, s.std_err, s.count};
}

namespace {

struct CcInstance {
  std::size_t n = 0;
  std::uint64_t edges = 0;
  std::array<std::uint32_t, kMaxBruteForceNodes> adj{};
};

CcInstance cc_instance(const Graph& g) {
  const std::vector<NodeId> nodes = g.nodes();
  if (nodes.size() > kMaxBruteForceNodes) {
    throw GraphError("brute_force_cc_opt: " + std::to_string(nodes.size()) + " nodes exceeds the limit of " +
                     std::to_string(kMaxBruteForceNodes));
  }
  CcInstance inst;
  inst.n = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i != j && g.has_edge(nodes[i], nodes[j])) inst.adj[i] |= 1u << j;
    }
  }
  inst.edges = g.edge_count();
  return inst;
}

// Partial partition: cluster bitmasks, pair count within clusters, edges within clusters.
struct Partial {
  std::array<std::uint32_t, kMaxBruteForceNodes> cluster{};
  std::size_t clusters = 0;
  std::uint64_t pairs = 0;
  std::uint64_t intra = 0;
};

// cost = (pairs - intra) missing intra-cluster edges + (edges - intra) cut edges
std::uint64_t cost_of(const CcInstance& inst, const Partial& p) { return p.pairs + inst.edges - 2 * p.intra; }

void place(const CcInstance& inst, Partial& p, std::size_t i, std::size_t c) {
  p.pairs += static_cast<std::uint64_t>(std::popcount(p.cluster[c]));
  p.intra += static_cast<std::uint64_t>(std::popcount(p.cluster[c] & inst.adj[i]));
  p.cluster[c] |= 1u << i;
  if (c == p.clusters) ++p.clusters;
}

void enumerate(const CcInstance& inst, Partial& p, std::size_t i, std::uint64_t& best) {
  if (i == inst.n) {
    best = std::min(best, cost_of(inst, p));
    return;
  }
  for (std::size_t c = 0; c <= p.clusters; ++c) {
    Partial next = p;
    place(inst, next, i, c);
    enumerate(inst, next, i + 1, best);
  }
}

void collect_prefixes(const CcInstance& inst, Partial& p, std::size_t i, std::size_t depth,
                      std::vector<Partial>& out) {
  if (i == depth) {
    out.push_back(p);
    return;
  }
  for (std::size_t c = 0; c <= p.clusters; ++c) {
    Partial next = p;
    place(inst, next, i, c);
    collect_prefixes(inst, next, i + 1, depth, out);
  }
}

}  // namespace

std::uint64_t brute_force_cc_opt(const Graph& g) {
  const CcInstance inst = cc_instance(g);
  Partial start;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  enumerate(inst, start, 0, best);
  return inst.n == 0 ? 0 : best;
}

std::uint64_t brute_force_cc_opt_parallel(const Graph& g) {
  const CcInstance inst = cc_instance(g);
  if (inst.n == 0) return 0;
  const std::size_t depth = std::min<std::size_t>(inst.n, 5);
  std::vector<Partial> prefixes;
  Partial start;
  collect_prefixes(inst, start, 0, depth, prefixes);

  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  const auto count = static_cast<std::int64_t>(prefixes.size());
#pragma omp parallel for schedule(dynamic) reduction(min : best)
  for (std::int64_t k = 0; k < count; ++k) {
    Partial p = prefixes[static_cast<std::size_t>(k)];
    std::uint64_t local = std::numeric_limits<std::uint64_t>::max();
    enumerate(inst, p, depth, local);
    best = std::min(best, local);
  }
  return best;
}

}  // namespace dynmis
