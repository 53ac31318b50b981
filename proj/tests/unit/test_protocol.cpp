#include "doctest.h"
#include "dynmis/engine.hpp"
#include "dynmis/errors.hpp"
#include "dynmis/protocol.hpp"
#include "helpers.hpp"

using namespace dynmis;
using namespace dynmis::test;

namespace {

const PriorityMap kIdentity = PriorityMap::identity();

ProtocolNode node(int v, NodeState s, std::initializer_list<std::pair<int, NodeState>> table,
                  ProtocolKind kind = ProtocolKind::FourState) {
  ProtocolNode n;
  n.id = id(v);
  n.priority = kIdentity.at(id(v));
  n.state = s;
  n.protocol_kind = kind;
  for (auto [w, ws] : table) n.neighbor_table.upsert(id(w), {kIdentity.at(id(w)), ws});
  return n;
}

BroadcastMsg msg(int v, NodeState s) { return {id(v), kIdentity.at(id(v)), s}; }

}  // namespace

TEST_SUITE("protocol") {
  TEST_CASE("neighbor table keeps entries sorted and unique") {
    NeighborTable t;
    t.upsert(id(5), {kIdentity.at(id(5)), NodeState::M});
    t.upsert(id(2), {kIdentity.at(id(2)), NodeState::NotM});
    t.upsert(id(5), {kIdentity.at(id(5)), NodeState::C});
    REQUIRE(t.size() == 2);
    CHECK(t.begin()->id == id(2));
    CHECK(t.find(id(5))->state == NodeState::C);
    t.erase(id(2));
    CHECK_FALSE(t.contains(id(2)));
    CHECK(t.find(id(9)) == nullptr);
  }

  TEST_CASE("desired output follows the lower neighbors") {
    CHECK(desired_output(node(3, NodeState::M, {{1, NodeState::M}})) == NodeState::NotM);
    CHECK(desired_output(node(3, NodeState::NotM, {{1, NodeState::NotM}, {5, NodeState::M}})) == NodeState::M);
    ProtocolNode leaving = node(0, NodeState::M, {});
    leaving.departing = true;
    CHECK(desired_output(leaving) == NodeState::NotM);
    CHECK(invariant_violated(node(3, NodeState::M, {{1, NodeState::M}})));
    CHECK_FALSE(invariant_violated(node(3, NodeState::NotM, {{1, NodeState::M}})));
  }

  TEST_CASE("template reaction: forced out by a lower IN neighbor") {
    const ProtocolNode n = node(3, NodeState::M, {{1, NodeState::M}}, ProtocolKind::Template);
    const Reaction r = template_react(n, Trigger::LocalChange);
    CHECK(r.new_state == NodeState::NotM);
    REQUIRE(r.broadcast);
    CHECK(r.broadcast->sender == id(3));
    CHECK(r.broadcast->state == NodeState::NotM);
  }

  TEST_CASE("template reaction: a node with no lower neighbors joins") {
    const ProtocolNode n = node(0, NodeState::NotM, {{4, NodeState::M}}, ProtocolKind::Template);
    const Reaction r = template_react(n, Trigger::NeighborStateChange);
    CHECK(r.new_state == NodeState::M);
    CHECK(r.broadcast);
  }

  TEST_CASE("template reaction: no change, no broadcast") {
    const ProtocolNode n = node(2, NodeState::NotM, {{1, NodeState::M}}, ProtocolKind::Template);
    const Reaction r = template_react(n, Trigger::NeighborStateChange);
    CHECK_FALSE(r.changed(n));
    CHECK_FALSE(r.broadcast);
  }

  TEST_CASE("four-state: M node follows a lower neighbor into C") {
    const ProtocolNode n = node(3, NodeState::M, {{1, NodeState::C}});
    const BroadcastMsg e[] = {msg(1, NodeState::C)};
    const Reaction r = four_state_react(n, 4, e);
    CHECK(r.new_state == NodeState::C);
    REQUIRE(r.broadcast);
    CHECK(r.broadcast->state == NodeState::C);
  }

  TEST_CASE("four-state: NotM node stays while another lower neighbor is in M") {
    const ProtocolNode n = node(3, NodeState::NotM, {{1, NodeState::C}, {2, NodeState::M}});
    const BroadcastMsg e[] = {msg(1, NodeState::C)};
    const Reaction r = four_state_react(n, 4, e);
    CHECK(r.new_state == NodeState::NotM);
    CHECK_FALSE(r.broadcast);
  }

  TEST_CASE("four-state: NotM node with no other lower M moves to C") {
    const ProtocolNode n = node(3, NodeState::NotM, {{1, NodeState::C}, {2, NodeState::NotM}});
    const BroadcastMsg e[] = {msg(1, NodeState::C)};
    CHECK(four_state_react(n, 4, e).new_state == NodeState::C);
  }

  TEST_CASE("four-state: a higher neighbor in C does not pull a node in") {
    const ProtocolNode n = node(3, NodeState::M, {{7, NodeState::C}});
    const BroadcastMsg e[] = {msg(7, NodeState::C)};
    CHECK(four_state_react(n, 4, e).new_state == NodeState::M);
  }

  TEST_CASE("four-state: C waits two rounds and for higher C neighbors") {
    ProtocolNode n = node(3, NodeState::C, {{1, NodeState::NotM}, {5, NodeState::C}});
    n.entered_C_round = 4;
    CHECK(four_state_react(n, 5, {}).new_state == NodeState::C);
    CHECK(four_state_react(n, 6, {}).new_state == NodeState::C);
    n.neighbor_table.upsert(id(5), {kIdentity.at(id(5)), NodeState::R});
    CHECK(four_state_react(n, 5, {}).new_state == NodeState::C);
    const Reaction r = four_state_react(n, 6, {});
    CHECK(r.new_state == NodeState::R);
    CHECK(r.broadcast);
  }

  TEST_CASE("four-state: R resolves once every lower neighbor settled") {
    const ProtocolNode all_out = node(3, NodeState::R, {{1, NodeState::NotM}, {2, NodeState::NotM}, {8, NodeState::C}});
    CHECK(four_state_react(all_out, 9, {}).new_state == NodeState::M);

    const ProtocolNode one_in = node(3, NodeState::R, {{1, NodeState::NotM}, {2, NodeState::M}});
    CHECK(four_state_react(one_in, 9, {}).new_state == NodeState::NotM);

    const ProtocolNode waiting = node(3, NodeState::R, {{1, NodeState::R}, {2, NodeState::NotM}});
    CHECK(four_state_react(waiting, 9, {}).new_state == NodeState::R);

    ProtocolNode leaving = node(0, NodeState::R, {});
    leaving.departing = true;
    CHECK(four_state_react(leaving, 9, {}).new_state == NodeState::NotM);
  }

  TEST_CASE("four-state trigger moves a broken settled node to C") {
    CHECK(four_state_trigger(node(3, NodeState::M, {{1, NodeState::M}})).new_state == NodeState::C);
    CHECK(four_state_trigger(node(3, NodeState::NotM, {{1, NodeState::NotM}})).new_state == NodeState::C);
    const Reaction r = four_state_trigger(node(3, NodeState::NotM, {{1, NodeState::M}}));
    CHECK(r.new_state == NodeState::NotM);
    CHECK_FALSE(r.broadcast);
  }

  TEST_CASE("stable configuration holds greedy states and visible tables") {
    Graph g = path_graph(3);
    g.add_node(id(7), false);
    g.add_edge(id(7), id(1));
    const NodeMap nodes = stable_configuration(g, kIdentity, ProtocolKind::FourState);
    CHECK(nodes.size() == 4);
    CHECK(nodes.at(id(0)).state == NodeState::M);
    CHECK(nodes.at(id(1)).state == NodeState::NotM);
    CHECK(nodes.at(id(2)).state == NodeState::M);
    CHECK(nodes.at(id(1)).neighbor_table.size() == 2);
    CHECK_FALSE(nodes.at(id(7)).visible);
    CHECK(nodes.at(id(7)).neighbor_table.size() == 1);
    CHECK(stability_check(nodes, g, kIdentity));
  }

  TEST_CASE("stability_check rejects C nodes and invariant breaks") {
    const Graph g = path_graph(3);
    NodeMap nodes = stable_configuration(g, kIdentity, ProtocolKind::FourState);
    nodes.at(id(2)).state = NodeState::C;
    nodes.at(id(2)).entered_C_round = 1;
    CHECK_FALSE(stability_check(nodes, g, kIdentity));

    NodeMap broken = stable_configuration(g, kIdentity, ProtocolKind::FourState);
    broken.at(id(2)).state = NodeState::NotM;
    broken.at(id(1)).neighbor_table.upsert(id(2), {kIdentity.at(id(2)), NodeState::NotM});
    CHECK_FALSE(stability_check(broken, g, kIdentity));

    NodeMap stale = stable_configuration(g, kIdentity, ProtocolKind::FourState);
    stale.at(id(1)).neighbor_table.erase(id(2));
    CHECK_FALSE(stability_check(stale, g, kIdentity));
  }

  TEST_CASE("init_change: edge insertion between IN nodes") {
    const Graph g = make_graph(2, {});
    NodeMap nodes = stable_configuration(g, kIdentity, ProtocolKind::FourState);
    const ChangePlan plan = init_change(nodes, g, kIdentity, EdgeInsert{id(0), id(1)}, ProtocolKind::FourState);
    REQUIRE(plan.preamble.size() == 1);
    CHECK(plan.preamble[0] == std::vector<NodeId>{id(0), id(1)});
    CHECK(plan.evaluators == std::vector<NodeId>{id(1)});
    CHECK(plan.trigger_round == 2);

    const ChangeResult r = run_sync(g, kIdentity, EdgeInsert{id(0), id(1)}, ProtocolKind::FourState, {.keep_logs = true});
    CHECK(r.metrics.preamble_broadcasts == 2);
    CHECK(r.metrics.adjustments == 1);
    bool entered_c = false;
    for (const RoundLog& log : r.logs) {
      for (const StateChange& sc : log.state_changes) entered_c |= sc.node == id(1) && sc.to == NodeState::C;
    }
    CHECK(entered_c);
  }

  TEST_CASE("init_change: isolated node insertion ends IN with few broadcasts") {
    const Graph g = path_graph(2);
    const ChangeResult r = run_sync(g, kIdentity, NodeInsert{id(5), {}}, ProtocolKind::FourState);
    CHECK(r.final_states.in(id(5)));
    CHECK(r.metrics.broadcasts <= 6);
  }

  TEST_CASE("init_change: abrupt deletion of an IN star center") {
    const Graph g = star_graph(5);
    const ChangeResult r = run_sync(g, kIdentity, NodeDeleteAbrupt{id(0)}, ProtocolKind::FourState, {.keep_logs = true});
    REQUIRE_FALSE(r.logs.empty());
    CHECK(r.logs[0].round == 1);
    std::size_t into_c = 0;
    for (const StateChange& sc : r.logs[0].state_changes) into_c += sc.to == NodeState::C;
    CHECK(into_c == 5);
    CHECK(r.final_states.size() == 5);
  }

  TEST_CASE("init_change rejects invalid changes") {
    const Graph g = path_graph(2);
    NodeMap nodes = stable_configuration(g, kIdentity, ProtocolKind::Template);
    CHECK_THROWS_AS(init_change(nodes, g, kIdentity, EdgeInsert{id(0), id(1)}, ProtocolKind::Template), GraphError);
    CHECK_THROWS_AS(init_change(nodes, g, kIdentity, NodeUnmute{id(0)}, ProtocolKind::Template), GraphError);
  }
}
