#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/graph.hpp"
#include "dynmis/oracle.hpp"
#include "dynmis/protocol.hpp"

namespace dynmis {

struct StateChange {
  NodeId node;
  NodeState from;
  NodeState to;
};

struct RoundLog {
  std::uint32_t round = 0;
  std::vector<BroadcastMsg> broadcasts;
  std::vector<StateChange> state_changes;
  /// Broadcasts sent as part of an insertion preamble.
  std::size_t preamble_broadcasts = 0;

  /// One JSON object on a single line.
  std::string to_json_line() const;
};

struct ChangeMetrics {
  std::size_t adjustments = 0;
  /// Sync: last round with a broadcast. Async: longest causal chain.
  std::size_t rounds = 0;
  std::size_t broadcasts = 0;
  std::size_t preamble_broadcasts = 0;
  /// Largest number of moves to C / out of R made by a single node.
  std::size_t max_c_entries = 0;
  std::size_t max_r_exits = 0;
};

struct ChangeResult {
  /// Left empty when record_outputs is off.
  MisAssignment final_states;
  ChangeMetrics metrics;
  std::vector<RoundLog> logs;
};

struct SyncOptions {
  /// 0 selects 3n + 10 with n the larger of the node counts before and after.
  std::uint32_t max_rounds = 0;
  bool keep_logs = false;
  /// Verify the whole graph after the change instead of the touched region.
  bool full_check = false;
  /// Fill ChangeResult::final_states (costs a pass over all nodes).
  bool record_outputs = true;
};

struct AsyncOptions {
  /// 0 selects 64 (n + m) + 1024.
  std::size_t max_events = 0;
  bool full_check = false;
  bool record_outputs = true;
};

/// True iff every visible node is settled, every table matches the true state
/// of the corresponding visible neighbors, and the MIS invariant holds on g.
/// In-flight messages are the caller's concern.
bool stability_check(const NodeMap& nodes, const Graph& g, const PriorityMap& p);

/// A network that persists across topology changes. Each apply_* call takes
/// it from one stable configuration to the next, throwing InvariantViolation
/// if the protocol fails to stabilize to a valid MIS.
class Network {
 public:
  /// Starts in the greedy MIS configuration of g.
  Network(Graph g, PriorityMap p, ProtocolKind kind);

  ChangeResult apply_sync(const TopologyChange& c, const SyncOptions& opts = {});
  /// Template protocol only.
  ChangeResult apply_async(const TopologyChange& c, std::uint64_t scheduler_seed, const AsyncOptions& opts = {});

  const Graph& graph() const { return graph_; }
  const PriorityMap& priorities() const { return priorities_; }
  const NodeMap& nodes() const { return nodes_; }
  ProtocolKind kind() const { return kind_; }

  /// Outputs of the visible nodes.
  MisAssignment outputs() const;
  /// Number of visible nodes in M.
  std::size_t mis_size() const;

 private:
  void apply_topology(const TopologyChange& c, const ChangePlan& plan);
  void retire(NodeId v);
  void verify(const std::vector<NodeId>& touched, bool full) const;

  Graph graph_;
  PriorityMap priorities_;
  ProtocolKind kind_;
  NodeMap nodes_;
};

ChangeResult run_sync(const Graph& g_old, const PriorityMap& p, const TopologyChange& c, ProtocolKind kind,
                      const SyncOptions& opts = {});

ChangeResult run_async(const Graph& g_old, const PriorityMap& p, const TopologyChange& c,
                       std::uint64_t scheduler_seed, const AsyncOptions& opts = {});

}  // namespace dynmis
