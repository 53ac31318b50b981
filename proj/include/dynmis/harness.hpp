#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynmis/clustering.hpp"
#include "dynmis/engine.hpp"
#include "dynmis/scenario.hpp"
#include "dynmis/stats.hpp"
#include "dynmis/trials.hpp"

namespace dynmis {

enum class Mode { Sync, Async };

struct RunConfig {
  ProtocolKind kind = ProtocolKind::FourState;
  Mode mode = Mode::Sync;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  /// Compute |S| of every change (costs a graph copy per change).
  bool influence = true;
  /// Keep one ChangeRecord per change and trial.
  bool keep_records = true;
  /// Verify the whole graph after every change.
  bool full_check = false;
  Execution exec = Execution::Parallel;
  /// Receives every RoundLog as (trial, change index, log); forces serial execution.
  std::function<void(std::size_t, std::size_t, const RoundLog&)> round_sink;
};

struct ChangeRecord {
  std::size_t trial = 0;
  std::size_t change_idx = 0;
  ChangeType type{};
  ChangeMetrics metrics;
  /// -1 when not computed.
  long long s_size = -1;
};

struct TrialStats {
  std::string scenario;
  std::vector<ChangeRecord> records;
  Summary adjustments;
  Summary rounds;
  Summary broadcasts;
  /// Per-trial MIS size after the last change.
  Summary final_mis_size;
  /// Largest per-node R exits and C entries seen in any change.
  std::size_t max_r_exits = 0;
  std::size_t max_c_entries = 0;
};

/// Priority seed of trial t.
inline std::uint64_t trial_seed(const Scenario& s, std::uint64_t base, std::size_t t) {
  return t < s.seeds.size() ? s.seeds[t] : base + t;
}

/// Runs every change of s in order, stabilizing after each, once per trial
/// with fresh priorities. Throws InvariantViolation if a change ends in an
/// invalid configuration and ScenarioError if a change does not fit.
TrialStats run_scenario(const Scenario& s, const RunConfig& cfg);

/// CSV header: scenario,trial,change_idx,change_type,adjustments,rounds,broadcasts,S_size
void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const TrialStats& stats);
/// metric,count,mean,std_err,max rows for adjustments, rounds, broadcasts and final MIS size.
void write_summary_csv(std::ostream& out, const TrialStats& stats);
/// Aggregates recomputed from the per-change records.
TrialStats summarize_records(const std::string& scenario, const std::vector<ChangeRecord>& records);

/// Greedy MIS of the changed graph under the fixed identity order.
MisAssignment deterministic_baseline(const Graph& g, const TopologyChange& c);

/// Per-change adjustments of the scenario under the identity order.
std::vector<std::size_t> deterministic_adjustments(const Scenario& s, ProtocolKind kind);

/// A random change sequence turning the empty graph into `target`,
/// with detours: extra edges and temporary nodes that are later deleted.
/// Temporary node ids start above every target id.
std::vector<TopologyChange> random_construction(const Graph& target, Rng& rng);

struct HistoryReport {
  std::size_t constructions = 0;
  std::size_t mismatches = 0;
  /// (seed index, sequence index) of the first mismatch.
  std::optional<std::pair<std::size_t, std::size_t>> first_mismatch;
};

/// For every seed, builds `target` through every sequence and compares the
/// final outputs with greedy_mis(target, π). Throws ScenarioError if a
/// sequence does not produce target.
HistoryReport history_independence_demo(const Graph& target, const std::vector<std::vector<TopologyChange>>& sequences,
                                        const std::vector<std::uint64_t>& seeds, ProtocolKind kind,
                                        Execution exec = Execution::Parallel);

// Experiments shared by the CLI demos and the acceptance suite.

struct HistoryTarget {
  Graph target;
  HistoryReport report;
};
/// `targets` random G(8, 0.3) graphs, each built through `sequences` random
/// constructions and checked under `seeds` priority seeds.
std::vector<HistoryTarget> history_independence_sweep(std::size_t targets, std::size_t sequences, std::size_t seeds,
                                                      std::uint64_t seed, ProtocolKind kind,
                                                      Execution exec = Execution::Parallel);

/// Final MIS size of star(n) built by the protocol, one sample per trial.
Summary star_mis_size(std::size_t n, std::size_t trials, std::uint64_t seed, ProtocolKind kind,
                      Execution exec = Execution::Parallel);
inline double star_expected_mis(std::size_t n) {
  const double nn = static_cast<double>(n);
  return (nn - 1.0) * (nn - 1.0) / nn + 1.0 / nn;
}

/// Matching size of the greedy matching on `paths` disjoint 3-edge paths with
/// fresh edge priorities per trial; `invalid` counts non-maximal results.
struct MatchingStats {
  Summary size;
  std::size_t invalid = 0;
};
MatchingStats three_paths_matching(std::size_t paths, std::size_t trials, std::uint64_t seed,
                                   Execution exec = Execution::Parallel);

/// Same reduction run dynamically over the three_paths scenario, checked
/// change by change against the static greedy matching. Returns mismatches.
std::size_t three_paths_dynamic_mismatches(std::size_t paths, std::size_t trials, std::uint64_t seed,
                                           ProtocolKind kind);

struct SeparationStats {
  /// Deterministic per-deletion adjustments.
  std::vector<std::size_t> deterministic;
  /// Randomized per-deletion adjustments pooled over trials.
  Summary randomized_per_deletion;
  /// Randomized total adjustments over the k deletions, per trial.
  Summary randomized_total;
  double randomized_total_min = 0.0;
};
SeparationStats bipartite_separation(std::size_t k, std::size_t trials, std::uint64_t seed, ProtocolKind kind,
                                     Execution exec = Execution::Parallel);

struct ChangeSample {
  ChangeMetrics metrics;
  std::size_t s_size = 0;
  /// Degree of v* in the graph that contains it (g_new for arrivals, g_old otherwise).
  std::size_t locus_degree = 0;
};
/// One change of type t per trial on a fresh G(n, p) with fresh priorities.
/// For unmute the graph also holds a muted node joined to each visible node
/// with probability p.
std::vector<ChangeSample> single_change_samples(std::size_t n, double p, ChangeType t, std::size_t trials,
                                                std::uint64_t seed, ProtocolKind kind,
                                                Execution exec = Execution::Parallel);

struct ApproxRow {
  Graph graph;
  std::uint64_t opt = 0;
  Summary cost;
};
/// Random graphs with 1..max_n nodes (edge density drawn per graph), each
/// with the Monte-Carlo pivot-clustering cost and the exact optimum.
std::vector<ApproxRow> clustering_approx(std::size_t graphs, std::size_t max_n, std::size_t trials,
                                         std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace dynmis
