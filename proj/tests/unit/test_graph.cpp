#include "doctest.h"
#include "dynmis/change.hpp"
#include "dynmis/errors.hpp"
#include "dynmis/graph.hpp"
#include "helpers.hpp"

using namespace dynmis;
using namespace dynmis::test;

TEST_SUITE("graph") {
  TEST_CASE("adjacency is symmetric and sorted") {
    Graph g = make_graph(4, {{2, 0}, {0, 1}, {3, 0}});
    CHECK(g.neighbors(id(0)) == std::vector<NodeId>{id(1), id(2), id(3)});
    CHECK(g.has_edge(id(2), id(0)));
    CHECK(g.has_edge(id(0), id(2)));
    CHECK(g.degree(id(0)) == 3);
    CHECK(g.edges() == std::vector<Edge>{{id(0), id(1)}, {id(0), id(2)}, {id(0), id(3)}});
    g.remove_edge(id(0), id(2));
    CHECK_FALSE(g.has_edge(id(2), id(0)));
    CHECK(g.edge_count() == 2);
  }

  TEST_CASE("rejects self-loops, duplicates and missing endpoints") {
    Graph g = make_graph(2, {{0, 1}});
    CHECK_THROWS_AS(g.add_edge(id(0), id(0)), GraphError);
    CHECK_THROWS_AS(g.add_edge(id(0), id(1)), GraphError);
    CHECK_THROWS_AS(g.add_edge(id(0), id(5)), GraphError);
    CHECK_THROWS_AS(g.add_node(id(1)), GraphError);
    CHECK_THROWS_AS(g.remove_edge(id(0), id(5)), GraphError);
    CHECK_THROWS_AS(g.remove_node(id(5)), GraphError);
  }

  TEST_CASE("muted nodes are skipped by neighbor queries but counted when unmuted") {
    Graph g = make_graph(3, {{0, 1}});
    g.add_node(id(9), false);
    g.add_edge(id(9), id(0));
    g.add_edge(id(9), id(2));
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 1);
    CHECK(g.neighbors(id(0)) == std::vector<NodeId>{id(1)});
    CHECK(g.adjacency(id(0)).size() == 2);
    CHECK(g.all_nodes().size() == 4);
    g.set_visible(id(9), true);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(id(9)) == 2);
    g.remove_node(id(9));
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 1);
    CHECK(g.was_retired(id(9)));
  }

  TEST_CASE("counts agree with enumeration under churn") {
    Graph g = complete_graph(5);
    g.set_visible(id(2), false);
    g.remove_edge(id(0), id(1));
    g.remove_node(id(4));
    CHECK(g.node_count() == g.nodes().size());
    CHECK(g.edge_count() == g.edges().size());
    CHECK(g.edge_count() == 2);
  }

  TEST_CASE("lower_neighbors") {
    const PriorityMap p = PriorityMap::identity();
    const Graph path = path_graph(3);
    CHECK(lower_neighbors(path, p, id(1)) == std::vector<NodeId>{id(0)});
    CHECK(lower_neighbors(make_graph(1, {}), p, id(0)).empty());
    const Graph star = star_graph(4);
    CHECK(lower_neighbors(star, p, id(0)).empty());
    for (int leaf = 1; leaf <= 4; ++leaf) CHECK(lower_neighbors(star, p, id(leaf)) == std::vector<NodeId>{id(0)});
  }
}

TEST_SUITE("change") {
  TEST_CASE("apply_change examples") {
    Graph ab = make_graph(3, {{0, 1}});
    CHECK(apply_change(ab, EdgeInsert{id(1), id(2)}) == path_graph(3));

    CHECK(apply_change(make_graph(1, {}), NodeDeleteGraceful{id(0)}).node_count() == 0);

    // K_{2,2} with sides {0,1} and {2,3}; dropping 0 leaves the path 2-1-3.
    const Graph k22 = make_graph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    const Graph after = apply_change(k22, NodeDeleteAbrupt{id(0)});
    CHECK(after.nodes() == std::vector<NodeId>{id(1), id(2), id(3)});
    CHECK(after.edges() == std::vector<Edge>{{id(1), id(2)}, {id(1), id(3)}});
  }

  TEST_CASE("graceful and abrupt variants produce the same topology") {
    const Graph g = cycle_graph(5);
    CHECK(apply_change(g, EdgeDeleteGraceful{id(0), id(1)}) == apply_change(g, EdgeDeleteAbrupt{id(0), id(1)}));
    CHECK(apply_change(g, NodeDeleteGraceful{id(3)}) == apply_change(g, NodeDeleteAbrupt{id(3)}));
  }

  TEST_CASE("node insertion and unmute") {
    const Graph g = path_graph(3);
    const Graph h = apply_change(g, NodeInsert{id(7), {id(0), id(2)}});
    CHECK(h.neighbors(id(7)) == std::vector<NodeId>{id(0), id(2)});

    Graph m = g;
    m.add_node(id(8), false);
    m.add_edge(id(8), id(1));
    const Graph u = apply_change(m, NodeUnmute{id(8)});
    CHECK(u.visible(id(8)));
    CHECK(u.neighbors(id(1)) == std::vector<NodeId>{id(0), id(2), id(8)});
  }

  TEST_CASE("validate_change rejects changes that do not fit") {
    Graph g = path_graph(3);
    g.add_node(id(5), false);
    g.add_edge(id(5), id(0));
    CHECK_THROWS_AS(validate_change(g, EdgeInsert{id(0), id(1)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, EdgeInsert{id(0), id(9)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, EdgeDeleteAbrupt{id(0), id(2)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeInsert{id(1), {}}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeInsert{id(9), {id(9)}}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeInsert{id(9), {id(5)}}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeDeleteGraceful{id(9)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeUnmute{id(1)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, EdgeInsert{id(5), id(2)}), GraphError);
    CHECK_THROWS_AS(validate_change(g, NodeDeleteAbrupt{id(0)}), GraphError);
    CHECK_NOTHROW(validate_change(g, NodeUnmute{id(5)}));
    CHECK_NOTHROW(validate_change(g, EdgeInsert{id(0), id(2)}));
  }

  TEST_CASE("deleted ids are never reused") {
    Graph g = apply_change(path_graph(3), NodeDeleteAbrupt{id(2)});
    CHECK_THROWS_AS(validate_change(g, NodeInsert{id(2), {}}), GraphError);
  }

  TEST_CASE("inverse undoes edge changes and node insertion") {
    const Graph g = path_graph(4);
    for (const TopologyChange& c : {TopologyChange{EdgeInsert{id(0), id(3)}},
                                    TopologyChange{EdgeDeleteGraceful{id(1), id(2)}},
                                    TopologyChange{NodeInsert{id(9), {id(1), id(3)}}}}) {
      const auto inv = inverse(g, c);
      REQUIRE(inv);
      CHECK(apply_change(apply_change(g, c), *inv).edges() == g.edges());
    }
    CHECK_FALSE(inverse(g, NodeDeleteAbrupt{id(0)}));
  }

  TEST_CASE("change type names round-trip") {
    for (ChangeType t : kAllChangeTypes) CHECK(parse_change_type(to_string(t)) == t);
    CHECK_FALSE(parse_change_type("edge_flip"));
    CHECK(to_string(ChangeType::NodeDeleteAbrupt) == "node_delete_abrupt");
  }

  TEST_CASE("locus examples") {
    const PriorityMap p = PriorityMap::identity();
    CHECK(locus(p, EdgeInsert{id(1), id(4)}) == Locus{id(4), id(1)});
    CHECK(locus(p, EdgeInsert{id(4), id(1)}) == Locus{id(4), id(1)});
    CHECK(locus(p, NodeInsert{id(6), {id(1)}}) == Locus{id(6), id(6)});
    CHECK(locus(p, EdgeDeleteAbrupt{id(5), id(2)}) == Locus{id(5), id(2)});
    CHECK(locus(p, NodeUnmute{id(3)}) == Locus{id(3), id(3)});
    const Graph g = path_graph(3);
    CHECK(locus(g, apply_change(g, NodeDeleteGraceful{id(1)}), p, NodeDeleteGraceful{id(1)}) == Locus{id(1), id(1)});
  }
}
