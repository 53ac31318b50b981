#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/graph.hpp"
#include "dynmis/oracle.hpp"

namespace dynmis {

/// M: in the MIS. NotM: not in the MIS. C: may need to change. R: ready to change.
enum class NodeState : std::uint8_t { M, NotM, C, R };

std::string_view to_string(NodeState s);
inline bool is_settled(NodeState s) { return s == NodeState::M || s == NodeState::NotM; }

enum class ProtocolKind {
  Template,   // direct reaction rule; a node may flip several times
  FourState,  // M / NotM / C / R; each influenced node settles once
};

std::string_view to_string(ProtocolKind k);

struct NeighborView {
  Priority priority;
  NodeState state = NodeState::NotM;
};

/// What a node believes about its visible neighbors. Sorted by id.
class NeighborTable {
 public:
  struct Entry {
    NodeId id;
    NeighborView view;
  };

  void upsert(NodeId id, NeighborView view);
  void erase(NodeId id);
  const NeighborView* find(NodeId id) const;
  bool contains(NodeId id) const { return find(id) != nullptr; }
  std::size_t size() const { return entries_.size(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<Entry> entries_;
};

struct ProtocolNode {
  NodeId id{};
  Priority priority;
  NodeState state = NodeState::NotM;
  NeighborTable neighbor_table;
  /// Round in which the node broadcast its move to C; set iff state == C.
  std::optional<std::uint32_t> entered_C_round;
  ProtocolKind protocol_kind = ProtocolKind::FourState;
  /// Muted nodes listen but neither react nor broadcast.
  bool visible = true;
  /// Gracefully deleted node that relays until the system is stable. It
  /// settles as NotM whenever it settles.
  bool departing = false;
};

using NodeMap = std::unordered_map<NodeId, ProtocolNode>;

struct BroadcastMsg {
  NodeId sender;
  Priority priority;
  NodeState state;
};

struct Reaction {
  NodeState new_state;
  std::optional<BroadcastMsg> broadcast;

  bool changed(const ProtocolNode& n) const { return new_state != n.state; }
};

enum class Trigger { LocalChange, NeighborStateChange };

/// The state the MIS invariant asks for, judged from the neighbor table.
NodeState desired_output(const ProtocolNode& node);

/// True when a settled node's state disagrees with desired_output.
bool invariant_violated(const ProtocolNode& node);

/// Direct reaction rule: IN iff no lower neighbor is IN; broadcast on change.
Reaction template_react(const ProtocolNode& node, Trigger trigger);

/// Four-state transition rules. `node.neighbor_table` already includes the
/// events delivered this round; `events` are those deliveries.
///  M:    a lower neighbor moved to C                               -> C
///  NotM: a lower neighbor moved to C and no lower neighbor is in M -> C
///  C:    no higher neighbor in C and entered C >= 2 rounds ago     -> R
///  R:    every lower neighbor settled -> M if all are NotM, else NotM
Reaction four_state_react(const ProtocolNode& node, std::uint32_t round, std::span<const BroadcastMsg> events);

/// Locus evaluation at the trigger round: a settled node whose invariant is
/// broken moves to C.
Reaction four_state_trigger(const ProtocolNode& node);

/// Bootstrap of one topology change.
///
/// In round k+1 every node in preamble[k] broadcasts its priority and current
/// state. In trigger_round every evaluator checks its own invariant and, if
/// broken, flips (template) or moves to C (four-state).
struct ChangePlan {
  std::vector<std::vector<NodeId>> preamble;
  std::uint32_t trigger_round = 1;
  std::vector<NodeId> evaluators;
  std::optional<NodeId> departing;
  /// Node removed from the topology before round 1 (abrupt deletion).
  std::optional<NodeId> removed;

  std::uint32_t last_scheduled_round() const {
    return std::max<std::uint32_t>(trigger_round, static_cast<std::uint32_t>(preamble.size()));
  }
};

/// One node per stored node of g (muted ones included) in the greedy MIS
/// configuration of the visible graph, each table holding its visible neighbors.
NodeMap stable_configuration(const Graph& g, const PriorityMap& p, ProtocolKind kind);

/// Prepares `nodes` (stable on g_old) for change c and returns its schedule.
/// The caller applies the topology part of c to g_old afterwards.
///
/// Template runs assume new neighbors are told about each other by the
/// change itself. Four-state runs learn new neighbors through preamble
/// broadcasts: one exchange round for an edge insertion, two rounds for a
/// node insertion, one announcement for an unmute. Abrupt node deletion makes
/// every neighbor of the deleted node an evaluator, so all broken neighbors
/// move to C together in round 1.
ChangePlan init_change(NodeMap& nodes, const Graph& g_old, const PriorityMap& p, const TopologyChange& c,
                       ProtocolKind kind);

}  // namespace dynmis
