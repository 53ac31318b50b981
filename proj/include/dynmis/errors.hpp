#pragma once

#include <stdexcept>
#include <string>

namespace dynmis {

/// A topology change or graph query that does not fit the current graph.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed scenario input (bad JSON, unknown op, invalid change mid-sequence).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The maintained structure stopped satisfying the MIS invariant, or a protocol
/// failed to reach stability. Always a bug, never an input problem.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dynmis
