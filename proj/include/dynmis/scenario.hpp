#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dynmis/change.hpp"
#include "dynmis/graph.hpp"

namespace dynmis {

struct Scenario {
  std::string name;
  Graph initial_graph;
  std::vector<TopologyChange> changes;
  /// Optional fixed seeds; empty means "derive from the run's base seed".
  std::vector<std::uint64_t> seeds;
};

/// Reads the JSON-lines scenario format. Lines:
///   {"op":"scenario","name":"...","seeds":[1,2]}       (optional header)
///   {"op":"init_node","v":3}  {"op":"init_node","v":4,"muted":true}
///   {"op":"init_edge","u":3,"v":4}
///   {"op":"edge_insert","u":3,"v":7}  {"op":"node_insert","v":9,"nbrs":[1,2]}
///   {"op":"node_delete_abrupt","v":3}  {"op":"node_unmute","v":4}  ...
/// Blank lines and lines starting with '#' are skipped. Every change is
/// checked against the graph it applies to. Throws ScenarioError with the
/// offending line number.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& s);

/// Throws ScenarioError naming the first change that does not fit.
void validate_scenario(const Scenario& s);

/// The graph after every change of s.
Graph final_graph(const Scenario& s);

/// Insert a center, then n-1 leaves attached to it. n ≥ 1.
Scenario star_scenario(std::size_t n);

/// `paths` disjoint paths of 3 edges: per path 4 isolated node insertions,
/// then its 3 edge insertions.
Scenario three_paths_scenario(std::size_t paths);

/// Build K_{k,k} (L = ids 0..k-1 inserted first, then each R node inserted
/// with all of L as neighbors), then delete L gracefully in id order.
Scenario bipartite_kk_scenario(std::size_t k);

/// G(n, p) substrate plus a pool of `muted` muted nodes in the initial graph,
/// followed by `steps` random changes drawn across all seven change types.
Scenario gnp_churn_scenario(std::size_t n, double p, std::size_t steps, std::size_t muted, std::uint64_t seed);

/// Dispatch by generator name with string parameters, as used by `sweep`.
/// Known: star(n), three_paths(paths), bipartite_kk(k),
/// gnp_churn(n, p, steps, muted). Throws ScenarioError on bad input.
Scenario generate_scenario(const std::string& kind, const std::map<std::string, std::string>& params,
                           std::uint64_t seed);

/// Index of the first change of a scenario that removes a node of side L in
/// bipartite_kk_scenario(k).
inline std::size_t bipartite_deletion_start(std::size_t k) { return 2 * k; }

}  // namespace dynmis
