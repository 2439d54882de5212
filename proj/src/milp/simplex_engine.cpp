#include "simplex_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oeh/kernels/kernels.hpp"

namespace oeh::milp::detail {

namespace {

constexpr int kRefactorInterval = 100;
constexpr double kDropTol = 1e-14;
constexpr double kDegenerateStep = 1e-12;
constexpr int kMaxRestarts = 8;

kernels::CompressedView view(const SparseMatrix& m) { return {m.start, m.index, m.value}; }

inline std::size_t at(int i) { return static_cast<std::size_t>(i); }

}  // namespace

// ---------------------------------------------------------------------------------------
// BasisFactor

bool BasisFactor::factor(const SparseMatrix& csc, int n, const std::vector<int>& head) {
  m_ = static_cast<int>(head.size());
  etas_.clear();
  start_.assign(1, 0);
  index_.clear();
  value_.clear();
  for (int r = 0; r < m_; ++r) {
    const int j = head[at(r)];
    if (j < n) {
      for (int p = csc.start[at(j)]; p < csc.start[at(j) + 1]; ++p) {
        index_.push_back(csc.index[at(p)]);
        value_.push_back(csc.value[at(p)]);
      }
    } else {
      index_.push_back(j - n);
      value_.push_back(-1.0);
    }
    start_.push_back(static_cast<int>(index_.size()));
  }
  return lu_.factor(m_, start_, index_, value_);
}

void BasisFactor::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  lu_.solve(v);
  for (const auto& eta : etas_) {
    const double xr = v[at(eta.row)] / eta.pivot;
    v[at(eta.row)] = xr;
    if (xr == 0.0) continue;
    for (std::size_t k = 0; k < eta.index.size(); ++k) v[at(eta.index[k])] -= eta.value[k] * xr;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[at(it->row)];
    for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v[at(it->index[k])];
    v[at(it->row)] = acc / it->pivot;
  }
  lu_.solve_transpose(v);
}

void BasisFactor::push_eta(int r, const std::vector<double>& alpha) {
  Eta eta;
  eta.row = r;
  eta.pivot = alpha[at(r)];
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    const double a = alpha[at(i)];
    if (std::abs(a) > kDropTol) {
      eta.index.push_back(i);
      eta.value.push_back(a);
    }
  }
  etas_.push_back(std::move(eta));
}

// ---------------------------------------------------------------------------------------
// SimplexEngine

SimplexEngine::SimplexEngine(const MILPInstance& instance, const SolverConfig& config)
    : instance_(instance), config_(config) {
  n_ = static_cast<int>(instance.num_variables());
  m_ = static_cast<int>(instance.num_constraints());
  const auto total = at(n_ + m_);
  pivtol_ = config.pivot_tol;

  const auto& c = instance.cost();
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax > 0.0) cost_scale_ = std::exp2(std::round(std::log2(cmax)));
  cost_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) cost_[at(j)] = c[at(j)] / cost_scale_;

  lo_.assign(total, 0.0);
  up_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    const auto& v = instance.variable(j);
    lo_[at(j)] = v.lower;
    up_[at(j)] = v.upper;
  }
  orig_lo_.assign(lo_.begin(), lo_.begin() + n_);
  orig_up_.assign(up_.begin(), up_.begin() + n_);
  const auto& rows = instance.constraints();
  for (int i = 0; i < m_; ++i) {
    const auto& row = rows[at(i)];
    const auto k = at(n_ + i);
    switch (row.sense) {
      case Sense::LessEqual: lo_[k] = -kInfinity; up_[k] = row.rhs; break;
      case Sense::GreaterEqual: lo_[k] = row.rhs; up_[k] = kInfinity; break;
      case Sense::Equal: lo_[k] = row.rhs; up_[k] = row.rhs; break;
    }
  }

  x_.assign(total, 0.0);
  d_.assign(total, 0.0);
  y_.assign(at(m_), 0.0);
  alpha_.assign(at(m_), 0.0);
  rho_.assign(at(m_), 0.0);
  row_alpha_.assign(total, 0.0);
  dots_.assign(at(n_), 0.0);
  touched_mark_.assign(at(n_), 0);
  install_slack_basis();
}

void SimplexEngine::set_structural_bounds(int j, double lower, double upper) {
  lo_[at(j)] = lower;
  up_[at(j)] = upper;
}

void SimplexEngine::restore_structural_bounds() {
  std::copy(orig_lo_.begin(), orig_lo_.end(), lo_.begin());
  std::copy(orig_up_.begin(), orig_up_.end(), up_.begin());
}

void SimplexEngine::install_slack_basis() {
  head_.resize(at(m_));
  state_.assign(at(n_ + m_), VarState::Basic);
  for (int i = 0; i < m_; ++i) head_[at(i)] = n_ + i;
  for (int j = 0; j < n_; ++j) {
    const double c = cost_[at(j)];
    const bool has_lo = std::isfinite(lo_[at(j)]);
    const bool has_up = std::isfinite(up_[at(j)]);
    VarState s;
    if (c < 0.0) {
      s = has_up ? VarState::AtUpper : (has_lo ? VarState::AtLower : VarState::FreeZero);
    } else {
      s = has_lo ? VarState::AtLower : (has_up ? VarState::AtUpper : VarState::FreeZero);
    }
    state_[at(j)] = s;
  }
}

void SimplexEngine::place_nonbasic_at_bounds() {
  const int total = n_ + m_;
  for (int j = 0; j < total; ++j) {
    auto& s = state_[at(j)];
    if (s == VarState::Basic) continue;
    const bool has_lo = std::isfinite(lo_[at(j)]);
    const bool has_up = std::isfinite(up_[at(j)]);
    if (s == VarState::AtLower && !has_lo) s = has_up ? VarState::AtUpper : VarState::FreeZero;
    if (s == VarState::AtUpper && !has_up) s = has_lo ? VarState::AtLower : VarState::FreeZero;
    if (s == VarState::FreeZero && has_lo) s = VarState::AtLower;
    if (s == VarState::FreeZero && has_up) s = VarState::AtUpper;
    switch (s) {
      case VarState::AtLower: x_[at(j)] = lo_[at(j)]; break;
      case VarState::AtUpper: x_[at(j)] = up_[at(j)]; break;
      default: x_[at(j)] = 0.0; break;
    }
  }
}

bool SimplexEngine::refactor() { return factor_.factor(instance_.csc(), n_, head_); }

void SimplexEngine::recompute_primal() {
  place_nonbasic_at_bounds();
  std::vector<double>& v = alpha_;
  v.assign(at(m_), 0.0);
  const auto& a = instance_.csc();
  for (int j = 0; j < n_; ++j) {
    if (state_[at(j)] == VarState::Basic) continue;
    const double xj = x_[at(j)];
    if (xj == 0.0) continue;
    for (int p = a.start[at(j)]; p < a.start[at(j) + 1]; ++p) v[at(a.index[at(p)])] -= a.value[at(p)] * xj;
  }
  for (int i = 0; i < m_; ++i) {
    if (state_[at(n_ + i)] != VarState::Basic) v[at(i)] += x_[at(n_ + i)];
  }
  factor_.ftran(v);
  for (int r = 0; r < m_; ++r) x_[at(head_[at(r)])] = v[at(r)];
}

void SimplexEngine::recompute_duals() {
  for (int r = 0; r < m_; ++r) y_[at(r)] = cost_[at(head_[at(r)])];
  factor_.btran(y_);
  kernels::column_dots(view(instance_.csc()), y_, dots_);
  for (int j = 0; j < n_; ++j) d_[at(j)] = cost_[at(j)] - dots_[at(j)];
  for (int i = 0; i < m_; ++i) d_[at(n_ + i)] = y_[at(i)];
  for (int r = 0; r < m_; ++r) d_[at(head_[at(r)])] = 0.0;
}

bool SimplexEngine::primal_feasible() const {
  for (int r = 0; r < m_; ++r) {
    const int j = head_[at(r)];
    const double x = x_[at(j)];
    if (!std::isfinite(x)) return false;
    if (x < lo_[at(j)] - ptol_ * (1.0 + std::abs(lo_[at(j)]))) return false;
    if (x > up_[at(j)] + ptol_ * (1.0 + std::abs(up_[at(j)]))) return false;
  }
  return true;
}

bool SimplexEngine::dual_feasible() const {
  const int total = n_ + m_;
  for (int j = 0; j < total; ++j) {
    if (state_[at(j)] == VarState::Basic || is_fixed(j)) continue;
    const double d = d_[at(j)];
    if (!std::isfinite(d)) return false;
    switch (state_[at(j)]) {
      case VarState::AtLower: if (d < -dtol_) return false; break;
      case VarState::AtUpper: if (d > dtol_) return false; break;
      case VarState::FreeZero: if (std::abs(d) > dtol_) return false; break;
      case VarState::Basic: break;
    }
  }
  return true;
}

bool SimplexEngine::make_dual_feasible() {
  const int total = n_ + m_;
  bool ok = true;
  for (int j = 0; j < total; ++j) {
    auto& s = state_[at(j)];
    if (s == VarState::Basic || is_fixed(j)) continue;
    const double d = d_[at(j)];
    if (s == VarState::AtLower && d < -dtol_) {
      if (std::isfinite(up_[at(j)])) s = VarState::AtUpper; else ok = false;
    } else if (s == VarState::AtUpper && d > dtol_) {
      if (std::isfinite(lo_[at(j)])) s = VarState::AtLower; else ok = false;
    } else if (s == VarState::FreeZero && std::abs(d) > dtol_) {
      ok = false;
    }
  }
  return ok;
}

void SimplexEngine::load_column(int j, std::vector<double>& out) const {
  out.assign(at(m_), 0.0);
  if (j < n_) {
    const auto& a = instance_.csc();
    for (int p = a.start[at(j)]; p < a.start[at(j) + 1]; ++p) out[at(a.index[at(p)])] = a.value[at(p)];
  } else {
    out[at(j - n_)] = -1.0;
  }
}

void SimplexEngine::compute_pivot_row(const std::vector<double>& rho) {
  touched_.clear();
  int nonzeros = 0;
  for (double v : rho) nonzeros += (v != 0.0);
  if (nonzeros * 10 < m_) {
    std::fill(row_alpha_.begin(), row_alpha_.begin() + n_, 0.0);
    const auto& a = instance_.csr();
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[at(i)];
      if (ri == 0.0) continue;
      for (int p = a.start[at(i)]; p < a.start[at(i) + 1]; ++p) {
        const int j = a.index[at(p)];
        row_alpha_[at(j)] += ri * a.value[at(p)];
        if (!touched_mark_[at(j)]) {
          touched_mark_[at(j)] = 1;
          touched_.push_back(j);
        }
      }
    }
    for (int j : touched_) touched_mark_[at(j)] = 0;
  } else {
    kernels::column_dots(view(instance_.csc()), rho, std::span<double>(row_alpha_.data(), at(n_)));
    for (int j = 0; j < n_; ++j) {
      if (row_alpha_[at(j)] != 0.0) touched_.push_back(j);
    }
  }
  for (int i = 0; i < m_; ++i) {
    row_alpha_[at(n_ + i)] = -rho[at(i)];
    if (rho[at(i)] != 0.0) touched_.push_back(n_ + i);
  }
}

void SimplexEngine::pivot(int row, int entering, int leaving_state_bound, const std::vector<double>& alpha) {
  const int leaving = head_[at(row)];
  state_[at(leaving)] = leaving_state_bound > 0 && !is_fixed(leaving) ? VarState::AtUpper : VarState::AtLower;
  head_[at(row)] = entering;
  state_[at(entering)] = VarState::Basic;
  factor_.push_eta(row, alpha);
}

void SimplexEngine::check_iteration_budget() {
  if (++iterations_ > iteration_budget_) {
    throw SolverError("simplex iteration limit exceeded (" + std::to_string(iteration_budget_) + ")");
  }
}

SimplexEngine::Outcome SimplexEngine::run_primal() {
  const std::int64_t degenerate_limit = 3LL * (m_ + n_);
  std::int64_t degenerate = 0;
  bool bland = false;
  int troubles = 0;
  const int total = n_ + m_;
  const auto csc = view(instance_.csc());

  while (true) {
    check_iteration_budget();
    if (factor_.eta_count() >= kRefactorInterval) {
      if (!refactor()) return Outcome::Restart;
      recompute_primal();
    }

    bool phase1 = false;
    double sum_inf = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = head_[at(r)];
      const double x = x_[at(j)];
      double cr = 0.0;
      if (x < lo_[at(j)] - ptol_ * (1.0 + std::abs(lo_[at(j)]))) {
        cr = -1.0;
        sum_inf += lo_[at(j)] - x;
      } else if (x > up_[at(j)] + ptol_ * (1.0 + std::abs(up_[at(j)]))) {
        cr = 1.0;
        sum_inf += x - up_[at(j)];
      }
      y_[at(r)] = cr;
      phase1 = phase1 || cr != 0.0;
    }
    if (!phase1) {
      for (int r = 0; r < m_; ++r) y_[at(r)] = cost_[at(head_[at(r)])];
    }
    factor_.btran(y_);
    kernels::column_dots(csc, y_, dots_);

    int q = -1;
    double best = 0.0;
    double dq = 0.0;
    for (int j = 0; j < total; ++j) {
      const VarState s = state_[at(j)];
      if (s == VarState::Basic || is_fixed(j)) continue;
      const double dj = j < n_ ? (phase1 ? 0.0 : cost_[at(j)]) - dots_[at(j)] : y_[at(j - n_)];
      const bool eligible = (s == VarState::AtLower && dj < -dtol_) || (s == VarState::AtUpper && dj > dtol_) ||
                            (s == VarState::FreeZero && std::abs(dj) > dtol_);
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = dj;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        dq = dj;
      }
    }
    if (q < 0) {
      if (phase1) {
        phase1_infeasibility_ = sum_inf;
        return Outcome::Infeasible;
      }
      return Outcome::Optimal;
    }

    const double dir = dq < 0.0 ? 1.0 : -1.0;
    load_column(q, alpha_);
    factor_.ftran(alpha_);

    // Harris pass 1: largest step keeping every basic within its relaxed bound.
    double theta_relaxed = kInfinity;
    auto limit_for = [&](int r, double& bound, double& rate) -> bool {
      const double a = alpha_[at(r)];
      if (std::abs(a) <= pivtol_) return false;
      const int j = head_[at(r)];
      const double x = x_[at(j)];
      const double lo = lo_[at(j)];
      const double up = up_[at(j)];
      rate = -dir * a;
      if (rate < 0.0) {
        if (phase1 && x > up + ptol_ * (1.0 + std::abs(up))) {
          bound = up;
        } else if (x < lo - ptol_ * (1.0 + std::abs(lo))) {
          return false;
        } else {
          bound = lo;
        }
      } else {
        if (phase1 && x < lo - ptol_ * (1.0 + std::abs(lo))) {
          bound = lo;
        } else if (x > up + ptol_ * (1.0 + std::abs(up))) {
          return false;
        } else {
          bound = up;
        }
      }
      return std::isfinite(bound);
    };
    for (int r = 0; r < m_; ++r) {
      double bound = 0.0;
      double rate = 0.0;
      if (!limit_for(r, bound, rate)) continue;
      const double x = x_[at(head_[at(r)])];
      const double slack = std::abs(x - bound) + ptol_ * (1.0 + std::abs(bound));
      theta_relaxed = std::min(theta_relaxed, slack / std::abs(rate));
    }

    const double range = up_[at(q)] - lo_[at(q)];
    int leave = -1;
    double leave_bound = 0.0;
    double theta = kInfinity;
    if (std::isfinite(theta_relaxed)) {
      double best_pivot = -1.0;
      double best_ratio = kInfinity;
      for (int r = 0; r < m_; ++r) {
        double bound = 0.0;
        double rate = 0.0;
        if (!limit_for(r, bound, rate)) continue;
        const double x = x_[at(head_[at(r)])];
        const double ratio = std::max(0.0, (bound - x) / rate);
        if (bland) {
          if (ratio < best_ratio - kDegenerateStep ||
              (ratio <= best_ratio + kDegenerateStep && leave >= 0 && head_[at(r)] < head_[at(leave)])) {
            best_ratio = std::min(best_ratio, ratio);
            leave = r;
            leave_bound = bound;
            theta = ratio;
          }
        } else if (ratio <= theta_relaxed && std::abs(rate) > best_pivot) {
          best_pivot = std::abs(rate);
          leave = r;
          leave_bound = bound;
          theta = ratio;
        }
      }
    }

    if (leave < 0 && !std::isfinite(range)) {
      if (phase1) {
        // Phase 1 objective is bounded below; no blocking row means the factorization drifted.
        if (++troubles > 3) throw SolverError("primal simplex: numerical breakdown in phase 1");
        if (!refactor()) return Outcome::Restart;
        recompute_primal();
        continue;
      }
      ray_entering_ = q;
      ray_direction_ = dir > 0.0 ? 1 : -1;
      ray_alpha_ = alpha_;
      return Outcome::Unbounded;
    }

    if (std::isfinite(range) && (leave < 0 || range <= theta)) {
      for (int r = 0; r < m_; ++r) x_[at(head_[at(r)])] -= dir * range * alpha_[at(r)];
      if (dir > 0.0) {
        x_[at(q)] = up_[at(q)];
        state_[at(q)] = VarState::AtUpper;
      } else {
        x_[at(q)] = lo_[at(q)];
        state_[at(q)] = VarState::AtLower;
      }
      degenerate = 0;
      bland = false;
      continue;
    }

    for (int r = 0; r < m_; ++r) x_[at(head_[at(r)])] -= dir * theta * alpha_[at(r)];
    x_[at(q)] += dir * theta;
    const int leaving = head_[at(leave)];
    x_[at(leaving)] = leave_bound;
    pivot(leave, q, leave_bound == up_[at(leaving)] ? 1 : -1, alpha_);

    if (theta <= kDegenerateStep) {
      if (++degenerate > degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

SimplexEngine::Outcome SimplexEngine::run_dual() {
  const std::int64_t degenerate_limit = 3LL * (m_ + n_);
  std::int64_t degenerate = 0;
  bool bland = false;
  int troubles = 0;
  devex_.assign(at(m_), 1.0);

  while (true) {
    check_iteration_budget();
    if (factor_.eta_count() >= kRefactorInterval) {
      if (!refactor()) return Outcome::Restart;
      recompute_primal();
      recompute_duals();
    }

    int r = -1;
    double best = 0.0;
    for (int rr = 0; rr < m_; ++rr) {
      const int j = head_[at(rr)];
      const double x = x_[at(j)];
      double infeas = 0.0;
      if (x < lo_[at(j)] - ptol_ * (1.0 + std::abs(lo_[at(j)]))) {
        infeas = lo_[at(j)] - x;
      } else if (x > up_[at(j)] + ptol_ * (1.0 + std::abs(up_[at(j)]))) {
        infeas = x - up_[at(j)];
      } else {
        continue;
      }
      if (bland) {
        if (r < 0 || j < head_[at(r)]) r = rr;
      } else if (infeas * infeas > best * devex_[at(rr)]) {
        best = infeas * infeas / devex_[at(rr)];
        r = rr;
      }
    }
    if (r < 0) return Outcome::Optimal;

    const int p = head_[at(r)];
    const bool below = x_[at(p)] < lo_[at(p)];
    const double target = below ? lo_[at(p)] : up_[at(p)];
    const double delta = x_[at(p)] - target;
    const double s = delta > 0.0 ? 1.0 : -1.0;

    rho_.assign(at(m_), 0.0);
    rho_[at(r)] = 1.0;
    factor_.btran(rho_);
    compute_pivot_row(rho_);
    if (bland) std::sort(touched_.begin(), touched_.end());

    double theta_relaxed = kInfinity;
    auto ratio_for = [&](int j, double& exact, double& relaxed) -> bool {
      const VarState st = state_[at(j)];
      if (st == VarState::Basic || is_fixed(j)) return false;
      const double a = s * row_alpha_[at(j)];
      const double d = d_[at(j)];
      if (st == VarState::AtLower) {
        if (a <= pivtol_) return false;
        exact = std::max(0.0, d) / a;
        relaxed = (d + dtol_) / a;
      } else if (st == VarState::AtUpper) {
        if (a >= -pivtol_) return false;
        exact = std::min(0.0, d) / a;
        relaxed = (d - dtol_) / a;
      } else {
        if (std::abs(a) <= pivtol_) return false;
        exact = std::abs(d) / std::abs(a);
        relaxed = (std::abs(d) + dtol_) / std::abs(a);
      }
      return true;
    };
    for (int j : touched_) {
      double exact = 0.0;
      double relaxed = 0.0;
      if (ratio_for(j, exact, relaxed)) theta_relaxed = std::min(theta_relaxed, relaxed);
    }
    if (!std::isfinite(theta_relaxed)) {
      phase1_infeasibility_ = std::abs(delta);
      return Outcome::Infeasible;
    }

    int q = -1;
    double best_pivot = -1.0;
    double best_ratio = kInfinity;
    for (int j : touched_) {
      double exact = 0.0;
      double relaxed = 0.0;
      if (!ratio_for(j, exact, relaxed)) continue;
      if (bland) {
        if (exact < best_ratio - kDegenerateStep) {
          best_ratio = exact;
          q = j;
        }
      } else if (exact <= theta_relaxed && std::abs(row_alpha_[at(j)]) > best_pivot) {
        best_pivot = std::abs(row_alpha_[at(j)]);
        q = j;
      }
    }

    load_column(q, alpha_);
    factor_.ftran(alpha_);
    const double arq = alpha_[at(r)];
    if (std::abs(arq - row_alpha_[at(q)]) > 1e-7 * (1.0 + std::abs(arq)) || std::abs(arq) <= pivtol_) {
      if (++troubles > 5) return Outcome::Restart;
      if (!refactor()) return Outcome::Restart;
      recompute_primal();
      recompute_duals();
      continue;
    }

    double dq = d_[at(q)];
    if ((state_[at(q)] == VarState::AtLower && dq < 0.0) || (state_[at(q)] == VarState::AtUpper && dq > 0.0)) dq = 0.0;
    const double theta_d = dq / row_alpha_[at(q)];
    const double theta_p = delta / arq;

    for (int rr = 0; rr < m_; ++rr) x_[at(head_[at(rr)])] -= theta_p * alpha_[at(rr)];
    x_[at(q)] += theta_p;
    x_[at(p)] = target;

    if (theta_d != 0.0) {
      for (int j : touched_) {
        if (state_[at(j)] != VarState::Basic) d_[at(j)] -= theta_d * row_alpha_[at(j)];
      }
    }
    d_[at(q)] = 0.0;
    d_[at(p)] = -theta_d;
    const double wr = devex_[at(r)];
    for (int rr = 0; rr < m_; ++rr) {
      const double a = alpha_[at(rr)];
      if (rr == r || a == 0.0) continue;
      const double ratio = a / arq;
      devex_[at(rr)] = std::max(devex_[at(rr)], ratio * ratio * wr);
    }
    devex_[at(r)] = std::max(wr / (arq * arq), 1.0);
    pivot(r, q, below ? -1 : 1, alpha_);

    if (std::abs(theta_d) <= kDegenerateStep) {
      if (++degenerate > degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus SimplexEngine::drive() {
  iteration_budget_ = iterations_ + 50LL * (n_ + m_) + 10'000;
  phase1_infeasibility_ = 0.0;
  ray_entering_ = -1;
  for (int round = 0; round < kMaxRestarts; ++round) {
    if (!refactor()) {
      install_slack_basis();
      refactor();
    }
    recompute_primal();
    recompute_duals();
    const bool pf = primal_feasible();
    if (pf && dual_feasible()) return LpStatus::Optimal;

    Outcome out;
    if (!pf) {
      const bool dual_ok = make_dual_feasible();
      recompute_primal();
      out = dual_ok ? run_dual() : run_primal();
    } else {
      out = run_primal();
    }
    switch (out) {
      case Outcome::Infeasible: return LpStatus::Infeasible;
      case Outcome::Unbounded: return LpStatus::Unbounded;
      case Outcome::Optimal:
      case Outcome::Restart: break;
    }
    if (out == Outcome::Restart && round >= kMaxRestarts / 2) install_slack_basis();
  }
  throw SolverError("simplex failed to reach a numerically clean optimum");
}

LpStatus SimplexEngine::solve() {
  install_slack_basis();
  return drive();
}

LpStatus SimplexEngine::solve(const Basis& warm) {
  if (warm.head.size() != at(m_) || warm.state.size() != at(n_ + m_)) return solve();
  head_ = warm.head;
  state_ = warm.state;
  return drive();
}

std::vector<double> SimplexEngine::structural_values() const {
  return {x_.begin(), x_.begin() + n_};
}

std::vector<double> SimplexEngine::row_duals() const {
  std::vector<double> out(at(m_));
  for (int i = 0; i < m_; ++i) out[at(i)] = y_[at(i)] * cost_scale_;
  return out;
}

std::vector<double> SimplexEngine::structural_reduced_costs() const {
  std::vector<double> out(at(n_));
  for (int j = 0; j < n_; ++j) out[at(j)] = d_[at(j)] * cost_scale_;
  return out;
}

double SimplexEngine::objective() const { return instance_.evaluate_objective(structural_values()); }

double SimplexEngine::dual_objective() const {
  // Sum over all columns of d_j times the bound its sign selects; equals b'y plus the
  // bound terms of the Lagrangian dual when the reduced costs are sign-feasible.
  double acc = 0.0;
  const int total = n_ + m_;
  for (int j = 0; j < total; ++j) {
    const double d = d_[at(j)];
    if (d == 0.0) continue;
    double bound = d > 0.0 ? lo_[at(j)] : up_[at(j)];
    if (!std::isfinite(bound)) bound = x_[at(j)];
    acc += d * bound;
  }
  return acc * cost_scale_ + instance_.objective_offset();
}

std::vector<double> SimplexEngine::unbounded_ray() const {
  std::vector<double> ray(at(n_), 0.0);
  if (ray_entering_ < 0) return ray;
  if (ray_entering_ < n_) ray[at(ray_entering_)] = ray_direction_;
  for (int r = 0; r < m_; ++r) {
    const int j = head_[at(r)];
    if (j < n_) ray[at(j)] = -ray_direction_ * ray_alpha_[at(r)];
  }
  return ray;
}

}  // namespace oeh::milp::detail
