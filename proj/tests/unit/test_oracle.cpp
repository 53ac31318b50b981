#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "dynmis/errors.hpp"
#include "dynmis/instances.hpp"
#include "dynmis/oracle.hpp"
#include "helpers.hpp"

using namespace dynmis;
using namespace dynmis::test;

namespace {

// x=0 joins v*=1 by an edge; 1 has neighbors u1=2 and u2=5 and the path 2-3-4-5
// closes the cycle. Identity priorities give v* < u1 < w1 < w2 < u2.
Graph wave_example() { return make_graph(6, {{1, 2}, {1, 5}, {2, 3}, {3, 4}, {4, 5}}); }

// Independent optimum: every labelling of the nodes with cluster indices.
std::uint64_t cc_opt_by_labels(const Graph& g) {
  const std::vector<NodeId> nodes = g.nodes();
  const std::size_t n = nodes.size();
  std::vector<std::size_t> label(n, 0);
  std::uint64_t best = UINT64_MAX;
  for (;;) {
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool edge = g.has_edge(nodes[i], nodes[j]);
        if ((label[i] == label[j]) != edge) ++cost;
      }
    }
    best = std::min(best, cost);
    std::size_t k = 0;
    while (k < n && ++label[k] == n) label[k++] = 0;
    if (k == n) break;
  }
  return n == 0 ? 0 : best;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("priority draws are frozen") {
    CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
    const PriorityMap p(42);
    CHECK(p.at(id(7)).draw == mix64(42 ^ mix64(7)));
    CHECK(p.at(id(7)) == PriorityMap(42).at(id(7)));
    CHECK(PriorityMap::identity().at(id(9)).draw == 9);
  }

  TEST_CASE("ordering can force one node first") {
    const PriorityMap p = PriorityMap::identity();
    const Ordering forced(p, id(5));
    CHECK(forced.less(id(5), id(0)));
    CHECK_FALSE(forced.less(id(0), id(5)));
    CHECK(forced.less(id(1), id(2)));
    CHECK_FALSE(forced.less(id(5), id(5)));
  }

  TEST_CASE("greedy_mis on a path takes the ends") {
    const MisAssignment a = greedy_mis(path_graph(3), PriorityMap::identity());
    CHECK(a == assignment({{0, true}, {1, false}, {2, true}}));
  }

  TEST_CASE("greedy_mis on a star with minimal center") {
    const MisAssignment a = greedy_mis(star_graph(6), PriorityMap::identity());
    CHECK(a.members() == std::vector<NodeId>{id(0)});
  }

  TEST_CASE("greedy_mis on a triangle takes the minimum") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PriorityMap p(seed);
      const Graph g = complete_graph(3);
      const MisAssignment a = greedy_mis(g, p);
      NodeId lowest = id(0);
      for (NodeId v : g.nodes()) {
        if (p.less(v, lowest)) lowest = v;
      }
      CHECK(a.members() == std::vector<NodeId>{lowest});
    }
  }

  TEST_CASE("greedy_mis skips muted nodes") {
    Graph g = path_graph(2);
    g.add_node(id(7), false);
    g.add_edge(id(7), id(0));
    const MisAssignment a = greedy_mis(g, PriorityMap::identity());
    CHECK(a.in_mis.size() == 2);
    CHECK(a.in(id(0)));
  }

  TEST_CASE("check_invariant examples") {
    const PriorityMap p = PriorityMap::identity();
    CHECK_FALSE(check_invariant(path_graph(3), p, assignment({{0, true}, {1, false}, {2, false}})));
    CHECK_FALSE(check_invariant(path_graph(2), p, assignment({{0, true}, {1, true}})));
    CHECK_THROWS_AS(check_invariant(path_graph(3), p, assignment({{0, true}})), GraphError);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      const Graph g = gnp(10, 0.3, rng);
      const PriorityMap q(rng());
      CHECK(check_invariant(g, q, greedy_mis(g, q)));
    }
  }

  TEST_CASE("independence and domination of the greedy MIS") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const Graph g = gnp(12, 0.25, rng);
      const MisAssignment a = greedy_mis(g, PriorityMap(rng()));
      for (NodeId v : g.nodes()) {
        bool in_nbr = false;
        for (NodeId w : g.neighbors(v)) {
          if (a.in(v)) CHECK_FALSE(a.in(w));
          in_nbr = in_nbr || a.in(w);
        }
        if (!a.in(v)) CHECK(in_nbr);
      }
    }
  }

  TEST_CASE("influenced_set follows the wave recursion") {
    const Graph g_old = wave_example();
    const TopologyChange c = EdgeInsert{id(0), id(1)};
    const Graph g_new = apply_change(g_old, c);
    const InfluencedSet s = influenced_set(g_old, g_new, PriorityMap::identity(), c);
    CHECK(s.size() == 5);
    CHECK(s.level.at(id(1)) == 0);
    CHECK(s.level.at(id(2)) == 1);
    CHECK(s.level.at(id(3)) == 2);
    CHECK(s.level.at(id(4)) == 3);
    CHECK(s.level.at(id(5)) == 4);
    CHECK(s.in_wave(id(5), 1));
    CHECK(s.in_wave(id(5), 4));
    CHECK_FALSE(s.contains(id(0)));
  }

  TEST_CASE("influenced_set is empty when v* stays valid") {
    // 0 is IN and 3 is OUT behind 2; joining them leaves 3 OUT.
    const Graph g_old = path_graph(4);
    const TopologyChange c = EdgeInsert{id(0), id(3)};
    const Graph g_new = apply_change(g_old, c);
    const InfluencedSet s = influenced_set(g_old, g_new, PriorityMap::identity(), c);
    CHECK(s.empty());
  }

  TEST_CASE("influenced_set rejects invalid old states") {
    const Graph g = path_graph(3);
    const TopologyChange c = EdgeDeleteGraceful{id(0), id(1)};
    CHECK_THROWS_AS(influenced_set(g, apply_change(g, c), PriorityMap::identity(), c,
                                   assignment({{0, true}, {1, true}, {2, false}})),
                    InvariantViolation);
  }

  TEST_CASE("the state diff is contained in S") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 400; ++i) {
      const Graph g_old = gnp(2 + rng() % 7, 0.35, rng);
      const ChangeType t = kAllChangeTypes[rng() % 6];  // unmute needs a muted node
      const auto c = random_change(g_old, t, rng, 0.35);
      if (!c) continue;
      const PriorityMap p(rng());
      const Graph g_new = apply_change(g_old, *c);
      const MisAssignment before = greedy_mis(g_old, p);
      const MisAssignment after = greedy_mis(g_new, p);
      const InfluencedSet s = influenced_set(g_old, g_new, p, *c);
      for (const auto& [v, in] : after.in_mis) {
        if (before.in_mis.count(v) && before.in(v) != in) CHECK(s.contains(v));
      }
      if (!s.empty()) CHECK(s.contains(locus(p, *c).v_star));
    }
  }

  TEST_CASE("s_prime equals S when v* is globally minimal") {
    const Graph g = path_graph(4);
    const TopologyChange c = NodeDeleteAbrupt{id(0)};
    const PriorityMap p = PriorityMap::identity();
    const InfluencedSet s = influenced_set(g, apply_change(g, c), p, c);
    CHECK(s.size() == 4);
    CHECK(s_prime(g, apply_change(g, c), p, c, id(0)).level == s.level);

    std::mt19937_64 rng(13);
    std::size_t checked = 0;
    for (int i = 0; i < 3000; ++i) {
      const Graph g_old = gnp(2 + rng() % 6, 0.4, rng);
      const auto d = random_change(g_old, kAllChangeTypes[3 + rng() % 3], rng, 0.4);
      const PriorityMap q(rng());
      const Graph g_new = apply_change(g_old, *d);
      const NodeId v_star = locus(q, *d).v_star;
      const std::vector<NodeId> all = g_new.contains(v_star) ? g_new.nodes() : g_old.nodes();
      if (std::any_of(all.begin(), all.end(), [&](NodeId u) { return q.less(u, v_star); })) continue;
      const InfluencedSet si = influenced_set(g_old, g_new, q, *d);
      if (si.empty()) continue;
      CHECK(s_prime(g_old, g_new, q, *d, v_star).level == si.level);
      ++checked;
    }
    CHECK(checked > 50);
  }

  TEST_CASE("s_prime covers the wave example") {
    const Graph g_old = wave_example();
    const TopologyChange c = EdgeInsert{id(0), id(1)};
    const InfluencedSet sp = s_prime(g_old, apply_change(g_old, c), PriorityMap::identity(), c, id(1));
    for (int v : {1, 2, 3, 4, 5}) CHECK(sp.contains(id(v)));
  }

  TEST_CASE("S is empty or inside S' on random small instances") {
    std::mt19937_64 rng(17);
    std::size_t nonempty = 0;
    for (int i = 0; i < 2000; ++i) {
      const Graph g_old = gnp(2 + rng() % 6, 0.4, rng);
      const auto c = random_change(g_old, kAllChangeTypes[rng() % 6], rng, 0.4);
      if (!c) continue;
      const PriorityMap p(rng());
      const Graph g_new = apply_change(g_old, *c);
      const NodeId v_star = locus(p, *c).v_star;
      const InfluencedSet s = influenced_set(g_old, g_new, p, *c);
      const InfluencedSet sp = s_prime(g_old, g_new, p, *c, v_star);
      const std::vector<NodeId> members = sp.members();
      const bool minimal = std::none_of(members.begin(), members.end(), [&](NodeId u) { return p.less(u, v_star); });
      if (!minimal) {
        CHECK(s.empty());
      } else {
        for (NodeId u : s.members()) CHECK(sp.contains(u));
      }
      nonempty += !s.empty();
    }
    CHECK(nonempty > 100);
  }

  TEST_CASE("mean_influence_estimate on two isolated nodes is exactly 1") {
    const Estimate e = mean_influence_estimate([](Rng&) { return make_graph(2, {}); },
                                               [](const Graph&, Rng&) -> TopologyChange {
                                                 return EdgeInsert{id(0), id(1)};
                                               },
                                               500, 9);
    CHECK(e.mean == 1.0);
    CHECK(e.std_err == 0.0);
    CHECK(e.trials == 500);
  }

  TEST_CASE("mean_influence_estimate is reproducible across execution modes") {
    auto graphs = [](Rng& r) { return gnp(20, 0.2, r); };
    auto changes = [](const Graph& g, Rng& r) { return *random_change(g, ChangeType::EdgeInsert, r); };
    const Estimate a = mean_influence_estimate(graphs, changes, 300, 4, Execution::Serial);
    const Estimate b = mean_influence_estimate(graphs, changes, 300, 4, Execution::Parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.std_err == b.std_err);
  }

  TEST_CASE("brute_force_cc_opt frozen values") {
    CHECK(brute_force_cc_opt(complete_graph(3)) == 0);
    CHECK(brute_force_cc_opt(path_graph(3)) == 1);
    CHECK(brute_force_cc_opt(cycle_graph(4)) == 2);
    CHECK(brute_force_cc_opt(Graph{}) == 0);
    CHECK(brute_force_cc_opt(make_graph(4, {})) == 0);
  }

  TEST_CASE("brute_force_cc_opt matches a labelling enumerator") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 40; ++i) {
      const Graph g = gnp(1 + rng() % 6, 0.5, rng);
      const std::uint64_t want = cc_opt_by_labels(g);
      CHECK(brute_force_cc_opt(g) == want);
      CHECK(brute_force_cc_opt_parallel(g) == want);
    }
  }

  TEST_CASE("brute_force_cc_opt size limit") {
    CHECK_THROWS_AS(brute_force_cc_opt(path_graph(kMaxBruteForceNodes + 1)), GraphError);
  }
}
