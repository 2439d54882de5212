#pragma once

#include <cstdint>

#include "oeh/milp/instance.hpp"

namespace oeh::testing {

struct RandomShape {
  int max_integers = 8;
  int max_continuous = 10;
  int max_rows = 15;
  /// Probability that a continuous variable has no upper bound; such instances get a
  /// bounding row unless `allow_unbounded`.
  double open_upper = 0.3;
  bool allow_unbounded = false;
  /// Probability of appending a contradictory row.
  double infeasible = 0.0;
};

/// Small random MILP built around a random feasible point (so it is feasible unless the
/// contradictory row is appended). Deterministic in `seed`.
milp::MILPInstance random_milp(std::uint64_t seed, const RandomShape& shape = {});

}  // namespace oeh::testing
