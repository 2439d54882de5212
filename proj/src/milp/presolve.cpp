#include "presolve.hpp"

#include <cmath>
#include <limits>

namespace oeh::milp::detail {

namespace {

constexpr double kIntegralSlack = 1e-9;

inline std::size_t at(VarId j) { return static_cast<std::size_t>(j); }

}  // namespace

Presolved presolve(const MILPInstance& instance, double tol) {
  Presolved out;
  const auto vars = instance.variables();
  const auto rows = instance.constraints();
  const std::size_t n = vars.size();
  std::vector<double> lo(n), up(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = vars[j].lower;
    up[j] = vars[j].upper;
  }
  std::vector<char> row_live(rows.size(), 1);
  auto fixed = [&](VarId j) { return lo[at(j)] == up[at(j)]; };

  bool changed = true;
  while (changed && !out.infeasible) {
    changed = false;
    for (std::size_t i = 0; i < rows.size() && !out.infeasible; ++i) {
      if (!row_live[i]) continue;
      const auto& row = rows[i];
      double rhs = row.rhs;
      int live = 0;
      Term single{};
      for (const auto& t : row.terms) {
        if (fixed(t.var)) {
          rhs -= t.coef * lo[at(t.var)];
        } else {
          ++live;
          single = t;
        }
      }
      if (live > 1) continue;
      row_live[i] = 0;
      changed = true;
      const double slack = tol * (1.0 + std::abs(row.rhs));
      if (live == 0) {
        const bool ok = (row.sense == Sense::LessEqual && 0.0 <= rhs + slack) ||
                        (row.sense == Sense::GreaterEqual && 0.0 >= rhs - slack) ||
                        (row.sense == Sense::Equal && std::abs(rhs) <= slack);
        if (!ok) out.infeasible = true;
        continue;
      }
      const double v = rhs / single.coef;
      const std::size_t j = at(single.var);
      bool upper_side = row.sense == Sense::LessEqual;
      if (single.coef < 0.0 && row.sense != Sense::Equal) upper_side = !upper_side;
      if (row.sense == Sense::Equal) {
        lo[j] = std::max(lo[j], v);
        up[j] = std::min(up[j], v);
        if (up[j] >= lo[j] - tol * (1.0 + std::abs(v))) lo[j] = up[j] = v;
      } else if (upper_side) {
        up[j] = std::min(up[j], v);
      } else {
        lo[j] = std::max(lo[j], v);
      }
      if (vars[j].integral) {
        lo[j] = std::ceil(lo[j] - kIntegralSlack);
        up[j] = std::floor(up[j] + kIntegralSlack);
      }
      if (lo[j] > up[j]) {
        if (lo[j] - up[j] <= tol * (1.0 + std::abs(lo[j])) && !vars[j].integral) {
          lo[j] = up[j];
        } else {
          out.infeasible = true;
        }
      }
    }
  }

  out.fixed.assign(n, std::numeric_limits<double>::quiet_NaN());
  if (out.infeasible) return out;

  std::vector<VarId> reduced_of(n, -1);
  std::vector<Variable> kept;
  double offset = instance.objective_offset();
  const auto& cost = instance.cost();
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] == up[j]) {
      out.fixed[j] = lo[j];
      offset += cost[j] * lo[j];
      continue;
    }
    Variable v = vars[j];
    v.id = static_cast<VarId>(kept.size());
    v.lower = lo[j];
    v.upper = up[j];
    reduced_of[j] = v.id;
    out.original_of.push_back(static_cast<VarId>(j));
    kept.push_back(std::move(v));
  }
  std::vector<LinearConstraint> kept_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!row_live[i]) continue;
    LinearConstraint c;
    c.name = rows[i].name;
    c.sense = rows[i].sense;
    c.rhs = rows[i].rhs;
    for (const auto& t : rows[i].terms) {
      if (reduced_of[at(t.var)] < 0) {
        c.rhs -= t.coef * out.fixed[at(t.var)];
      } else {
        c.terms.push_back({reduced_of[at(t.var)], t.coef});
      }
    }
    kept_rows.push_back(std::move(c));
  }
  std::vector<Term> obj;
  for (std::size_t j = 0; j < n; ++j) {
    if (reduced_of[j] >= 0 && cost[j] != 0.0) obj.push_back({reduced_of[j], cost[j]});
  }
  out.reduced = MILPInstance(std::move(kept), std::move(kept_rows), std::move(obj), offset, instance.name());
  return out;
}

std::vector<double> postsolve(const Presolved& p, const std::vector<double>& reduced_values) {
  std::vector<double> x = p.fixed;
  for (std::size_t k = 0; k < p.original_of.size(); ++k) x[at(p.original_of[k])] = reduced_values[k];
  return x;
}

}  // namespace oeh::milp::detail
