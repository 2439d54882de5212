#include "lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oeh::testing {

using milp::Sense;
using milp::SolveStatus;

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<double>> t;  // rows x (cols + 1)
  std::vector<int> basis;

  void pivot(int r, int c) {
    auto& pr = t[static_cast<std::size_t>(r)];
    const double pv = pr[static_cast<std::size_t>(c)];
    for (auto& v : pr) v /= pv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto& row = t[static_cast<std::size_t>(i)];
      const double f = row[static_cast<std::size_t>(c)];
      if (f == 0.0) continue;
      for (int k = 0; k <= cols; ++k) row[static_cast<std::size_t>(k)] -= f * pr[static_cast<std::size_t>(k)];
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  /// Minimises cost'x over the current tableau with Bland's rule. Columns with
  /// allowed[c] == false never enter. Returns false if unbounded.
  bool minimise(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      int enter = -1;
      for (int c = 0; c < cols && enter < 0; ++c) {
        if (!allowed[static_cast<std::size_t>(c)]) continue;
        if (std::find(basis.begin(), basis.end(), c) != basis.end()) continue;
        double d = cost[static_cast<std::size_t>(c)];
        for (int i = 0; i < rows; ++i) {
          d -= cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] * t[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        }
        if (d < -kEps) enter = c;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        const double a = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (a <= kEps) continue;
        const double ratio = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)] / a;
        if (ratio < best - kEps ||
            (ratio <= best + kEps && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

// Maps each original variable to x = offset + sign * x' (or x = x'+ - x'- when free).
struct ColumnMap {
  int plus = -1;
  int minus = -1;
  double offset = 0.0;
  double sign = 1.0;
};

}  // namespace

OracleResult oracle_lp(const milp::MILPInstance& instance, const std::vector<double>& lower,
                       const std::vector<double>& upper) {
  const int n = static_cast<int>(instance.num_variables());
  std::vector<double> lo(static_cast<std::size_t>(n)), up(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    lo[static_cast<std::size_t>(j)] = lower.empty() ? instance.variable(j).lower : lower[static_cast<std::size_t>(j)];
    up[static_cast<std::size_t>(j)] = upper.empty() ? instance.variable(j).upper : upper[static_cast<std::size_t>(j)];
  }

  std::vector<ColumnMap> map(static_cast<std::size_t>(n));
  int ncols = 0;
  for (int j = 0; j < n; ++j) {
    auto& cm = map[static_cast<std::size_t>(j)];
    const double l = lo[static_cast<std::size_t>(j)];
    const double u = up[static_cast<std::size_t>(j)];
    if (std::isfinite(l)) {
      cm = {ncols++, -1, l, 1.0};
    } else if (std::isfinite(u)) {
      cm = {ncols++, -1, u, -1.0};
    } else {
      cm.plus = ncols++;
      cm.minus = ncols++;
    }
  }

  // Dense rows over x' : coefficients, sense, rhs.
  struct Row {
    std::vector<double> a;
    Sense sense;
    double b;
  };
  std::vector<Row> rows;
  auto add_row = [&](const std::vector<std::pair<int, double>>& terms, Sense sense, double rhs) {
    Row r{std::vector<double>(static_cast<std::size_t>(ncols), 0.0), sense, rhs};
    for (auto [j, coef] : terms) {
      const auto& cm = map[static_cast<std::size_t>(j)];
      if (cm.minus >= 0) {
        r.a[static_cast<std::size_t>(cm.plus)] += coef;
        r.a[static_cast<std::size_t>(cm.minus)] -= coef;
      } else {
        r.a[static_cast<std::size_t>(cm.plus)] += coef * cm.sign;
        r.b -= coef * cm.offset;
      }
    }
    rows.push_back(std::move(r));
  };
  for (const auto& con : instance.constraints()) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& t : con.terms) terms.emplace_back(t.var, t.coef);
    add_row(terms, con.sense, con.rhs);
  }
  for (int j = 0; j < n; ++j) {
    const double l = lo[static_cast<std::size_t>(j)];
    const double u = up[static_cast<std::size_t>(j)];
    if (std::isfinite(l) && std::isfinite(u)) add_row({{j, 1.0}}, Sense::LessEqual, u);
  }

  std::vector<double> cost(static_cast<std::size_t>(ncols), 0.0);
  double offset = instance.objective_offset();
  for (const auto& t : instance.objective()) {
    const auto& cm = map[static_cast<std::size_t>(t.var)];
    if (cm.minus >= 0) {
      cost[static_cast<std::size_t>(cm.plus)] += t.coef;
      cost[static_cast<std::size_t>(cm.minus)] -= t.coef;
    } else {
      cost[static_cast<std::size_t>(cm.plus)] += t.coef * cm.sign;
      offset += t.coef * cm.offset;
    }
  }

  for (auto& r : rows) {
    if (r.b < 0.0) {
      for (auto& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == Sense::LessEqual) {
        r.sense = Sense::GreaterEqual;
      } else if (r.sense == Sense::GreaterEqual) {
        r.sense = Sense::LessEqual;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int nslack = 0;
  int nart = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::Equal) ++nslack;
    if (r.sense != Sense::LessEqual) ++nart;
  }
  Tableau tab;
  tab.rows = m;
  tab.cols = ncols + nslack + nart;
  tab.t.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(tab.cols) + 1, 0.0));
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  std::vector<bool> is_art(static_cast<std::size_t>(tab.cols), false);
  int next_slack = ncols;
  int next_art = ncols + nslack;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    auto& tr = tab.t[static_cast<std::size_t>(i)];
    for (int k = 0; k < ncols; ++k) tr[static_cast<std::size_t>(k)] = r.a[static_cast<std::size_t>(k)];
    tr[static_cast<std::size_t>(tab.cols)] = r.b;
    if (r.sense == Sense::LessEqual) {
      tr[static_cast<std::size_t>(next_slack)] = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = next_slack++;
    } else {
      if (r.sense == Sense::GreaterEqual) tr[static_cast<std::size_t>(next_slack++)] = -1.0;
      tr[static_cast<std::size_t>(next_art)] = 1.0;
      is_art[static_cast<std::size_t>(next_art)] = true;
      tab.basis[static_cast<std::size_t>(i)] = next_art++;
    }
  }

  OracleResult out;
  std::vector<bool> allowed(static_cast<std::size_t>(tab.cols), true);
  if (nart > 0) {
    std::vector<double> c1(static_cast<std::size_t>(tab.cols), 0.0);
    for (int k = 0; k < tab.cols; ++k) c1[static_cast<std::size_t>(k)] = is_art[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
    tab.minimise(c1, allowed);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_art[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])]) infeas += tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(tab.cols)];
    }
    if (infeas > 1e-7) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    for (int i = 0; i < m; ++i) {
      if (!is_art[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])]) continue;
      for (int k = 0; k < tab.cols; ++k) {
        if (!is_art[static_cast<std::size_t>(k)] && std::abs(tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) > 1e-9) {
          tab.pivot(i, k);
          break;
        }
      }
    }
    for (int k = 0; k < tab.cols; ++k) {
      if (is_art[static_cast<std::size_t>(k)]) allowed[static_cast<std::size_t>(k)] = false;
    }
  }
  std::vector<double> c2(static_cast<std::size_t>(tab.cols), 0.0);
  std::copy(cost.begin(), cost.end(), c2.begin());
  if (!tab.minimise(c2, allowed)) {
    out.status = SolveStatus::Unbounded;
    return out;
  }

  std::vector<double> xp(static_cast<std::size_t>(tab.cols), 0.0);
  for (int i = 0; i < m; ++i) xp[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])] = tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(tab.cols)];
  out.status = SolveStatus::Optimal;
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const auto& cm = map[static_cast<std::size_t>(j)];
    out.x[static_cast<std::size_t>(j)] = cm.minus >= 0
                                             ? xp[static_cast<std::size_t>(cm.plus)] - xp[static_cast<std::size_t>(cm.minus)]
                                             : cm.offset + cm.sign * xp[static_cast<std::size_t>(cm.plus)];
  }
  out.objective = instance.evaluate_objective(out.x);
  return out;
}

OracleResult oracle_milp(const milp::MILPInstance& instance) {
  const int n = static_cast<int>(instance.num_variables());
  std::vector<int> ints;
  std::vector<double> lo(static_cast<std::size_t>(n)), up(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& v = instance.variable(j);
    lo[static_cast<std::size_t>(j)] = v.lower;
    up[static_cast<std::size_t>(j)] = v.upper;
    if (v.integral) {
      ints.push_back(j);
      lo[static_cast<std::size_t>(j)] = std::ceil(v.lower);
      up[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
    }
  }
  for (int j : ints) {
    if (std::ceil(instance.variable(j).lower) > std::floor(instance.variable(j).upper)) return {};
  }

  OracleResult best;
  bool unbounded = false;
  while (true) {
    OracleResult r = oracle_lp(instance, lo, up);
    if (r.status == SolveStatus::Unbounded) unbounded = true;
    if (r.status == SolveStatus::Optimal && (best.status != SolveStatus::Optimal || r.objective < best.objective)) best = r;
    // odometer over integer values
    std::size_t k = 0;
    for (; k < ints.size(); ++k) {
      const auto j = static_cast<std::size_t>(ints[k]);
      if (lo[j] + 1.0 <= std::floor(instance.variable(ints[k]).upper)) {
        lo[j] += 1.0;
        up[j] = lo[j];
        break;
      }
      lo[j] = std::ceil(instance.variable(ints[k]).lower);
      up[j] = lo[j];
    }
    if (k == ints.size()) break;
  }
  if (unbounded) {
    OracleResult u;
    u.status = SolveStatus::Unbounded;
    return u;
  }
  return best;
}

OracleResult oracle_vertex_enumeration(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                       const std::vector<double>& c) {
  // Constraint set: rows a_i x <= b_i plus -x_j <= 0. Each vertex is the solution of n
  // linearly independent active constraints; enumerate all n-subsets.
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.size());
  const int total = m + n;
  std::vector<std::vector<double>> g(static_cast<std::size_t>(total), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<double> h(static_cast<std::size_t>(total), 0.0);
  for (int i = 0; i < m; ++i) {
    g[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
    h[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
  }
  for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(m + j)][static_cast<std::size_t>(j)] = -1.0;

  OracleResult best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pick[static_cast<std::size_t>(k)] = k;
  std::vector<std::vector<double>> mat(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n) + 1));
  while (true) {
    for (int r = 0; r < n; ++r) {
      const auto src = static_cast<std::size_t>(pick[static_cast<std::size_t>(r)]);
      std::copy(g[src].begin(), g[src].end(), mat[static_cast<std::size_t>(r)].begin());
      mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] = h[src];
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int p = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > std::abs(mat[static_cast<std::size_t>(p)][static_cast<std::size_t>(col)])) p = r;
      }
      if (std::abs(mat[static_cast<std::size_t>(p)][static_cast<std::size_t>(col)]) < 1e-10) {
        singular = true;
        break;
      }
      std::swap(mat[static_cast<std::size_t>(p)], mat[static_cast<std::size_t>(col)]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (f == 0.0) continue;
        for (int k = col; k <= n; ++k) mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
      }
    }
    if (!singular) {
      std::vector<double> x(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] / mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
      bool feasible = true;
      for (int i = 0; i < total && feasible; ++i) {
        double act = 0.0;
        for (int j = 0; j < n; ++j) act += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        feasible = act <= h[static_cast<std::size_t>(i)] + 1e-9 * (1.0 + std::abs(h[static_cast<std::size_t>(i)]));
      }
      if (feasible) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        if (best.status != SolveStatus::Optimal || obj < best.objective) {
          best.status = SolveStatus::Optimal;
          best.objective = obj;
          best.x = x;
        }
      }
    }
    int k = n - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == total - n + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (int r = k + 1; r < n; ++r) pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
  }
  return best;
}

}  // namespace oeh::testing
