#pragma once

// Removes singleton rows (turned into bounds) and fixed columns (folded into right-hand
// sides and the objective offset), repeating until nothing changes.

#include <vector>

#include "oeh/milp/instance.hpp"

namespace oeh::milp::detail {

struct Presolved {
  bool infeasible = false;
  MILPInstance reduced;
  std::vector<VarId> original_of;  ///< reduced variable -> original variable
  std::vector<double> fixed;       ///< value of every original variable removed (NaN when kept)
};

Presolved presolve(const MILPInstance& instance, double feasibility_tol);

/// Original-space values from reduced-space values.
std::vector<double> postsolve(const Presolved& p, const std::vector<double>& reduced_values);

}  // namespace oeh::milp::detail
