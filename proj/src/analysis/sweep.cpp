#include "oeh/analysis/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <random>
#include <stdexcept>

namespace oeh::analysis {

namespace {

struct Point {
  model::EnergySystem system;
  SweepRow row;
};

struct Outcome {
  SweepRow row;
  std::shared_ptr<const milp::WarmStart> basis;
};

Outcome solve_point(const model::EnergySystem& sys, SweepRow row, const milp::SolverConfig& config, const milp::WarmStart* warm) {
  const model::PlanningModel m = model::build_model(sys);
  const milp::MILPSolution sol = milp::solve_milp(m.instance, config, warm);
  SolveReport rep = analyze(sys, m, sol);
  row.status = rep.status;
  row.feasible = rep.has_solution;
  row.nodes = rep.nodes;
  row.lp_iterations = rep.lp_iterations;
  row.warm_started = warm != nullptr;
  if (rep.has_solution) {
    row.cost = rep.objective;
    row.emissions_mt = rep.emissions_t * 1e-6;
    row.gap = rep.gap;
    row.max_residual = rep.max_residual;
    row.losses = rep.losses;
    row.capacities = std::move(rep.capacities);
    double limit = 0.0;
    for (const auto& loc : sys.locations) {
      if (loc.onshore) limit += loc.onshore->pfs_cap_limit;
    }
    for (const auto& c : row.capacities) {
      const auto* tech = sys.find_technology(c.technology);
      if (tech && tech->kind == model::TechnologyKind::PowerFromShore) row.pfs_installed_mw += c.value;
    }
    row.pfs_utilization = limit > 0.0 ? row.pfs_installed_mw / limit : 0.0;
    if (std::isfinite(sys.policy.co2_cap)) {
      row.binding = rep.emissions_t >= sys.policy.co2_cap - 1e-6 * (1.0 + sys.policy.co2_cap);
    }
  }
  return {std::move(row), sol.root_basis};
}

/// Solves anchors cold, then the rest warm from their anchor, in parallel.
std::vector<SweepRow> run(std::vector<Point> points, const SweepOptions& options) {
  const std::size_t n = points.size();
  const std::size_t every = static_cast<std::size_t>(std::max(1, options.anchor_every));
  std::vector<std::size_t> anchors, others;
  for (std::size_t i = 0; i < n; ++i) (i % every == 0 ? anchors : others).push_back(i);
  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(anchors.begin(), anchors.end(), rng);
    std::shuffle(others.begin(), others.end(), rng);
  }

  std::vector<SweepRow> rows(n);
  std::vector<std::shared_ptr<const milp::WarmStart>> bases(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = sweep_threads(options.threads);

  auto phase = [&](const std::vector<std::size_t>& order, bool warm) {
    const auto count = static_cast<std::ptrdiff_t>(order.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const std::size_t i = order[static_cast<std::size_t>(k)];
      try {
        const milp::WarmStart* start = warm ? bases[i - i % every].get() : nullptr;
        Outcome out = solve_point(points[i].system, points[i].row, options.solver, start);
        rows[i] = std::move(out.row);
        if (!warm) bases[i] = std::move(out.basis);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  phase(anchors, false);
  phase(others, true);
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

Point make_point(const model::EnergySystem& base, std::size_t index, double parameter) {
  Point p{base, {}};
  p.row.index = index;
  p.row.parameter = parameter;
  return p;
}

}  // namespace

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Tax: return "tax";
    case SweepKind::Budget: return "budget";
    case SweepKind::Pfs: return "pfs";
  }
  return "?";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view s) {
  if (s == "tax") return SweepKind::Tax;
  if (s == "budget") return SweepKind::Budget;
  if (s == "pfs") return SweepKind::Pfs;
  return std::nullopt;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(lo <= hi)) throw std::invalid_argument("sweep range is empty: lo > hi");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

std::vector<double> budget_fractions(double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("budget step must be in (0, 1]");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double f = 1.0 - static_cast<double>(i) * step;
    if (f <= 1e-9) break;
    out.push_back(f);
  }
  out.push_back(0.0);
  return out;
}

int sweep_threads(int requested) {
  int n = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("OEHPLAN_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(1, n);
}

SweepResult sweep_co2_tax(const model::EnergySystem& base, const std::vector<double>& taxes, const SweepOptions& options) {
  std::vector<Point> points;
  for (std::size_t i = 0; i < taxes.size(); ++i) {
    points.push_back(make_point(base, i, taxes[i]));
    points.back().system.policy.co2_tax = taxes[i];
  }
  SweepResult r;
  r.kind = SweepKind::Tax;
  r.rows = run(std::move(points), options);
  return r;
}

SweepResult sweep_co2_budget(const model::EnergySystem& base, const std::vector<double>& fractions, const SweepOptions& options) {
  SweepResult r;
  r.kind = SweepKind::Budget;
  model::EnergySystem uncapped = base;
  uncapped.policy.co2_cap = std::numeric_limits<double>::infinity();
  const model::PlanningModel m = model::build_model(uncapped);
  const milp::MILPSolution sol = milp::solve_milp(m.instance, options.solver);
  if (!sol.has_incumbent) throw std::runtime_error("uncapped base case has no solution (" + std::string(milp::to_string(sol.status)) + ")");
  r.base_emissions_t = compute_emissions(uncapped, m, sol.values);

  std::vector<Point> points;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    points.push_back(make_point(uncapped, i, fractions[i]));
    points.back().system.policy.co2_cap = fractions[i] * r.base_emissions_t;
    points.back().row.cap_t = fractions[i] * r.base_emissions_t;
  }
  r.rows = run(std::move(points), options);
  return r;
}

SweepResult sweep_pfs_capacity(const model::EnergySystem& base, const std::vector<double>& limits, double fixed_tax,
                               const SweepOptions& options) {
  std::vector<Point> points;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    points.push_back(make_point(base, i, limits[i]));
    auto& sys = points.back().system;
    sys.policy.co2_tax = fixed_tax;
    for (auto& loc : sys.locations) {
      if (loc.onshore) loc.onshore->pfs_cap_limit = limits[i];
    }
  }
  SweepResult r;
  r.kind = SweepKind::Pfs;
  r.fixed_tax = fixed_tax;
  r.rows = run(std::move(points), options);
  return r;
}

std::optional<double> saturation_point(const std::vector<SweepRow>& rows, double rel_tol) {
  if (rows.size() < 2) return std::nullopt;
  auto same = [&](double a, double b) { return std::abs(a - b) <= rel_tol * (1.0 + std::abs(b)); };
  std::size_t first = rows.size() - 1;
  if (!rows[first].feasible) return std::nullopt;
  while (first > 0) {
    const SweepRow& prev = rows[first - 1];
    if (!prev.feasible || !same(prev.cost, rows.back().cost) || !same(prev.pfs_installed_mw, rows.back().pfs_installed_mw)) break;
    --first;
  }
  if (first == rows.size() - 1) return std::nullopt;
  return rows[first].parameter;
}

}  // namespace oeh::analysis
