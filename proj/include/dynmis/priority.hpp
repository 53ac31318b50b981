#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

namespace dynmis {

/// Node identity. Unique over the lifetime of a run and never reused.
enum class NodeId : std::uint64_t {};

constexpr NodeId node_id(std::uint64_t v) { return NodeId{v}; }
constexpr std::uint64_t raw(NodeId id) { return static_cast<std::uint64_t>(id); }

/// Position of a node in the random order. Compared lexicographically on
/// (draw, tiebreak), so two distinct nodes never compare equal.
struct Priority {
  std::uint64_t draw = 0;
  NodeId tiebreak{};

  friend constexpr auto operator<=>(const Priority&, const Priority&) = default;
};

/// SplitMix64 finalizer; used to derive independent streams from one seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Realizes the uniformly random order on nodes.
///
/// Each node's draw is a counter-based function of (seed, id): it is fixed the
/// moment the node exists, does not depend on creation order or on any
/// topology change, and two runs with the same seed agree on every node.
/// Explicit overrides exist for hand-built examples.
class PriorityMap {
 public:
  explicit PriorityMap(std::uint64_t seed = 0) : seed_(seed) {}

  /// Priority equal to the node id: the fixed order used by the deterministic baseline.
  static PriorityMap identity() {
    PriorityMap p(0);
    p.identity_ = true;
    return p;
  }

  Priority at(NodeId id) const {
    if (!overrides_.empty()) {
      if (auto it = overrides_.find(id); it != overrides_.end()) return {it->second, id};
    }
    if (identity_) return {raw(id), id};
    return {mix64(seed_ ^ mix64(raw(id))), id};
  }

  void set_draw(NodeId id, std::uint64_t draw) { overrides_[id] = draw; }

  bool less(NodeId a, NodeId b) const { return at(a) < at(b); }

  std::uint64_t seed() const { return seed_; }
  bool is_identity() const { return identity_; }

 private:
  std::uint64_t seed_;
  bool identity_ = false;
  std::unordered_map<NodeId, std::uint64_t> overrides_;
};

/// The order used by the oracle recursions: the priority order, optionally
/// with one node forced ahead of every other node.
class Ordering {
 public:
  explicit Ordering(const PriorityMap& p, std::optional<NodeId> forced_min = std::nullopt)
      : priorities_(&p), forced_min_(forced_min) {}

  bool less(NodeId a, NodeId b) const {
    if (a == b) return false;
    if (forced_min_) {
      if (a == *forced_min_) return true;
      if (b == *forced_min_) return false;
    }
    return priorities_->at(a) < priorities_->at(b);
  }

  const PriorityMap& priorities() const { return *priorities_; }
  std::optional<NodeId> forced_min() const { return forced_min_; }

 private:
  const PriorityMap* priorities_;
  std::optional<NodeId> forced_min_;
};

}  // namespace dynmis
