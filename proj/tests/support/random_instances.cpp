#include "random_instances.hpp"

#include <cmath>
#include <random>
#include <string>

namespace oeh::testing {

using milp::Sense;

milp::MILPInstance random_milp(std::uint64_t seed, const RandomShape& shape) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto integer = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return uniform(0.0, 1.0) < p; };
  auto coef = [&] { return std::round(uniform(-5.0, 5.0) * 10.0) / 10.0; };

  milp::InstanceBuilder b;
  const int ni = integer(0, shape.max_integers);
  const int nc = integer(1, shape.max_continuous);
  const int m = integer(1, shape.max_rows);
  std::vector<double> point;
  bool open = false;
  for (int k = 0; k < ni; ++k) {
    const double lo = integer(-1, 0);
    const double up = lo + integer(1, 2);
    b.add_variable("i" + std::to_string(k), lo, up, true);
    point.push_back(integer(static_cast<int>(lo), static_cast<int>(up)));
  }
  for (int k = 0; k < nc; ++k) {
    const double lo = chance(0.2) ? -5.0 : 0.0;
    const bool inf = chance(shape.open_upper);
    const double up = inf ? milp::kInfinity : lo + integer(5, 20);
    open = open || inf;
    b.add_variable("c" + std::to_string(k), lo, up, false);
    point.push_back(uniform(lo, inf ? lo + 10.0 : up));
  }
  const int n = ni + nc;
  for (int i = 0; i < m; ++i) {
    std::vector<milp::Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!chance(0.5)) continue;
      const double a = coef();
      terms.push_back({j, a});
      act += a * point[static_cast<std::size_t>(j)];
    }
    const int s = integer(0, 4);
    if (s <= 1) {
      b.add_constraint("r" + std::to_string(i), terms, Sense::LessEqual, act + uniform(0.0, 5.0));
    } else if (s <= 3) {
      b.add_constraint("r" + std::to_string(i), terms, Sense::GreaterEqual, act - uniform(0.0, 5.0));
    } else {
      b.add_constraint("r" + std::to_string(i), terms, Sense::Equal, act);
    }
  }
  if (open && !shape.allow_unbounded) {
    std::vector<milp::Term> terms;
    double act = 0.0;
    for (int j = ni; j < n; ++j) {
      terms.push_back({j, 1.0});
      act += point[static_cast<std::size_t>(j)];
    }
    b.add_constraint("bound", terms, Sense::LessEqual, act + 50.0);
  }
  if (shape.infeasible > 0.0 && chance(shape.infeasible)) {
    // x_0 >= up_0 + 1 together with its bound cannot hold.
    const auto& v = b.variable(0);
    const double ub = std::isfinite(v.upper) ? v.upper : 1e3;
    b.add_constraint("contradiction", {{0, 1.0}}, Sense::GreaterEqual, ub + 1.0);
    if (!std::isfinite(v.upper)) b.add_constraint("contradiction2", {{0, 1.0}}, Sense::LessEqual, ub);
  }
  for (int j = 0; j < n; ++j) b.add_objective(j, coef());
  b.add_objective_constant(std::round(uniform(-10.0, 10.0)));
  return b.build("RANDOM");
}

}  // namespace oeh::testing
