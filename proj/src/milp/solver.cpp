#include "oeh/milp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

#include "presolve.hpp"
#include "simplex_engine.hpp"

namespace oeh::milp {

namespace {

using detail::Basis;
using detail::LpStatus;
using detail::SimplexEngine;

struct BoundChange {
  int var = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Node {
  double bound = -kInfinity;
  std::uint64_t seq = 0;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

constexpr std::size_t kMaxStoredBases = 4096;

void apply_changes(SimplexEngine& engine, const std::vector<BoundChange>& changes) {
  engine.restore_structural_bounds();
  for (const auto& c : changes) engine.set_structural_bounds(c.var, c.lower, c.upper);
}

/// Most fractional integral variable, lowest id on ties; -1 if all are integral.
int branching_variable(const MILPInstance& instance, const std::vector<double>& x, double tol) {
  int best = -1;
  double best_dist = tol;
  for (const auto& v : instance.variables()) {
    if (!v.integral) continue;
    const double xv = x[static_cast<std::size_t>(v.id)];
    const double dist = std::abs(xv - std::round(xv));
    if (dist > best_dist) {
      best_dist = dist;
      best = v.id;
    }
  }
  return best;
}

Basis to_basis(const WarmStart& w) {
  Basis b;
  b.head = w.head;
  b.state.reserve(w.state.size());
  for (auto s : w.state) b.state.push_back(static_cast<detail::VarState>(s));
  return b;
}

std::shared_ptr<const WarmStart> to_warm_start(const Basis& b) {
  auto w = std::make_shared<WarmStart>();
  w->rows = static_cast<int>(b.head.size());
  w->cols = static_cast<int>(b.state.size()) - w->rows;
  w->head = b.head;
  w->state.reserve(b.state.size());
  for (auto s : b.state) w->state.push_back(static_cast<std::uint8_t>(s));
  return w;
}

class BranchAndBound {
 public:
  BranchAndBound(const MILPInstance& instance, const SolverConfig& config)
      : instance_(instance), config_(config), engine_(instance, config) {}

  MILPSolution run(const WarmStart* warm) {
    MILPSolution out;
    const LpStatus root = warm ? engine_.solve(to_basis(*warm)) : engine_.solve();
    out.lp_iterations = engine_.iterations();
    out.nodes = 1;
    if (root == LpStatus::Infeasible) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    if (root == LpStatus::Unbounded) {
      out.status = SolveStatus::Unbounded;
      return out;
    }
    const double root_obj = engine_.objective();
    auto root_basis = std::make_shared<const Basis>(engine_.basis());
    out.root_basis = to_warm_start(*root_basis);
    const std::vector<double> root_x = engine_.structural_values();

    if (branching_variable(instance_, root_x, config_.integrality_tol) < 0) {
      try_incumbent({}, root_x, root_obj, root_basis);
    } else {
      rounding_heuristic(root_x, root_basis);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{root_obj, seq_++, {}, root_basis});
    bool first = true;
    double global_bound = root_obj;

    while (!open.empty()) {
      global_bound = open.top().bound;
      if (has_incumbent_ && closed(global_bound)) break;
      if (out.nodes >= config_.node_limit) {
        out.status = SolveStatus::NodeLimit;
        finish(out, std::min(global_bound, incumbent_obj_));
        return out;
      }
      Node node = open.top();
      open.pop();

      double obj = root_obj;
      std::vector<double> x;
      std::shared_ptr<const Basis> basis;
      if (first) {
        first = false;
        x = root_x;
        basis = root_basis;
      } else {
        ++out.nodes;
        apply_changes(engine_, node.changes);
        const LpStatus st = node.basis ? engine_.solve(*node.basis) : engine_.solve();
        if (st == LpStatus::Unbounded) {
          out.status = SolveStatus::Unbounded;
          out.lp_iterations = engine_.iterations();
          return out;
        }
        if (st == LpStatus::Infeasible) continue;
        obj = engine_.objective();
        x = engine_.structural_values();
        if (open.size() < kMaxStoredBases) basis = std::make_shared<const Basis>(engine_.basis());
      }
      if (has_incumbent_ && closed(obj)) continue;

      const int j = branching_variable(instance_, x, config_.integrality_tol);
      if (j < 0) {
        try_incumbent(node.changes, x, obj, basis);
        continue;
      }
      const double xj = x[static_cast<std::size_t>(j)];
      const double lo = current_lower(node.changes, j);
      const double up = current_upper(node.changes, j);
      Node down{obj, seq_++, node.changes, basis};
      down.changes.push_back({j, lo, std::floor(xj)});
      Node upn{obj, seq_++, std::move(node.changes), basis};
      upn.changes.push_back({j, std::ceil(xj), up});
      open.push(std::move(down));
      open.push(std::move(upn));
    }

    out.lp_iterations = engine_.iterations();
    if (!has_incumbent_) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    out.status = SolveStatus::Optimal;
    finish(out, open.empty() ? incumbent_obj_ : std::min(global_bound, incumbent_obj_));
    return out;
  }

 private:
  [[nodiscard]] bool closed(double bound) const {
    return incumbent_obj_ - bound <= config_.optimality_gap * std::max(1.0, std::abs(incumbent_obj_));
  }

  [[nodiscard]] double current_lower(const std::vector<BoundChange>& changes, int j) const {
    double lo = instance_.variable(j).lower;
    for (const auto& c : changes) {
      if (c.var == j) lo = c.lower;
    }
    return lo;
  }

  [[nodiscard]] double current_upper(const std::vector<BoundChange>& changes, int j) const {
    double up = instance_.variable(j).upper;
    for (const auto& c : changes) {
      if (c.var == j) up = c.upper;
    }
    return up;
  }

  void finish(MILPSolution& out, double bound) {
    out.lp_iterations = engine_.iterations();
    out.has_incumbent = has_incumbent_;
    if (has_incumbent_) {
      out.values = incumbent_;
      out.objective = incumbent_obj_;
    }
    out.best_bound = bound;
  }

  /// Accepts an integral LP point; re-solves with the integers fixed at their rounded
  /// values so the stored incumbent is exactly integral.
  void try_incumbent(const std::vector<BoundChange>& changes, const std::vector<double>& x, double obj,
                     const std::shared_ptr<const Basis>& basis) {
    std::vector<BoundChange> fixed = changes;
    for (const auto& v : instance_.variables()) {
      if (!v.integral) continue;
      const double r = std::round(x[static_cast<std::size_t>(v.id)]);
      fixed.push_back({v.id, r, r});
    }
    apply_changes(engine_, fixed);
    const LpStatus st = basis ? engine_.solve(*basis) : engine_.solve();
    if (st == LpStatus::Optimal) {
      offer(engine_.structural_values(), engine_.objective());
    } else {
      offer(x, obj);
    }
  }

  void rounding_heuristic(const std::vector<double>& x, const std::shared_ptr<const Basis>& basis) {
    for (int mode = 0; mode < 2; ++mode) {
      std::vector<BoundChange> fixed;
      for (const auto& v : instance_.variables()) {
        if (!v.integral) continue;
        const double xv = x[static_cast<std::size_t>(v.id)];
        double r = mode == 0 ? std::round(xv) : std::ceil(xv - config_.integrality_tol);
        r = std::clamp(r, v.lower, v.upper);
        fixed.push_back({v.id, r, r});
      }
      apply_changes(engine_, fixed);
      if (engine_.solve(*basis) == LpStatus::Optimal) offer(engine_.structural_values(), engine_.objective());
    }
  }

  void offer(std::vector<double> x, double obj) {
    if (!has_incumbent_ || obj < incumbent_obj_) {
      incumbent_ = std::move(x);
      incumbent_obj_ = obj;
      has_incumbent_ = true;
    }
  }

  const MILPInstance& instance_;
  SolverConfig config_;
  SimplexEngine engine_;
  std::uint64_t seq_ = 0;
  bool has_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInfinity;
};

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("solver config: ") + name + " must be positive");
  };
  positive(feasibility_tol, "feasibility_tol");
  positive(integrality_tol, "integrality_tol");
  positive(optimality_gap, "optimality_gap");
  positive(pivot_tol, "pivot_tol");
  if (node_limit <= 0) throw std::invalid_argument("solver config: node_limit must be positive");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::NodeLimit: return "NodeLimit";
  }
  return "?";
}

double MILPSolution::relative_gap() const {
  if (!has_incumbent) return kInfinity;
  return std::max(0.0, objective - best_bound) / std::max(1.0, std::abs(objective));
}

LPSolution solve_lp(const MILPInstance& instance, const SolverConfig& config) {
  config.validate();
  SimplexEngine engine(instance, config);
  const LpStatus st = engine.solve();
  LPSolution out;
  out.iterations = engine.iterations();
  switch (st) {
    case LpStatus::Optimal:
      out.status = SolveStatus::Optimal;
      out.values = engine.structural_values();
      out.duals = engine.row_duals();
      out.reduced_costs = engine.structural_reduced_costs();
      out.objective = engine.objective();
      out.dual_objective = engine.dual_objective();
      break;
    case LpStatus::Infeasible:
      out.status = SolveStatus::Infeasible;
      out.phase1_infeasibility = engine.phase1_infeasibility();
      break;
    case LpStatus::Unbounded:
      out.status = SolveStatus::Unbounded;
      out.ray = engine.unbounded_ray();
      break;
  }
  return out;
}

MILPSolution solve_milp(const MILPInstance& instance, const SolverConfig& config, const WarmStart* warm) {
  config.validate();
  const detail::Presolved pre = detail::presolve(instance, config.feasibility_tol);
  if (pre.infeasible) return MILPSolution{};
  const MILPInstance& reduced = pre.reduced;
  if (warm && (warm->rows != static_cast<int>(reduced.num_constraints()) || warm->cols != static_cast<int>(reduced.num_variables()))) {
    warm = nullptr;
  }
  BranchAndBound bb(reduced, config);
  MILPSolution out = bb.run(warm);
  if (out.has_incumbent) {
    out.values = detail::postsolve(pre, out.values);
    out.objective = instance.evaluate_objective(out.values);
  }
  return out;
}

}  // namespace oeh::milp
