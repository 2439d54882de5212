// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lp_oracle.hpp"
#include "oeh/aggregation/clustering.hpp"
#include "oeh/aggregation/hub_and_spoke.hpp"
#include "oeh/aggregation/profiles.hpp"
#include "oeh/analysis/accounting.hpp"
#include "oeh/analysis/sweep.hpp"
#include "oeh/milp/mps.hpp"
#include "oeh/milp/validation.hpp"
#include "oeh/model/io.hpp"
#include "random_instances.hpp"
#include "tiny_systems.hpp"

namespace fs = std::filesystem;
using namespace oeh;
using milp::SolveStatus;

namespace {

const fs::path kData = OEH_DATA_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

model::EnergySystem desk() { return model::load_system(kData / "desk" / "system.json"); }

milp::SolverConfig tight() {
  milp::SolverConfig c;
  c.optimality_gap = 1e-9;
  return c;
}

testing::RandomShape shape_for(std::uint64_t seed) {
  testing::RandomShape s;
  s.infeasible = seed % 10 == 0 ? 1.0 : 0.0;
  return s;
}

double max_turbine_output(const model::PlanningModel& m, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& pv : m.index.platforms) {
    for (const auto& tv : pv.turbines) {
      for (auto v : tv.power) worst = std::max(worst, std::abs(x[static_cast<std::size_t>(v)]));
    }
  }
  return worst;
}

model::EnergySystem fields66_system() {
  const auto fields = aggregation::read_fields_csv(kData / "fields66" / "fields.csv");
  aggregation::ClusterOptions opt;
  opt.k = 5;
  const auto clusters = aggregation::cluster_fields(fields, opt);
  const auto profiles = aggregation::generate_profiles(fields, aggregation::read_templates_csv(kData / "fields66" / "templates.csv"), 0);
  return aggregation::build_hub_and_spoke(fields, clusters, profiles, aggregation::read_onshore_sites_csv(kData / "fields66" / "onshore_sites.csv"));
}

Verdict milp_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int optimal = 0, mismatches = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 5000; seed < 5100; ++seed) {
    const auto inst = testing::random_milp(seed, shape_for(seed));
    const auto ours = milp::solve_milp(inst, tight());
    const auto ref = testing::oracle_milp(inst);
    if (ours.status != ref.status) {
      ++mismatches;
      continue;
    }
    if (ref.status != SolveStatus::Optimal) continue;
    ++optimal;
    const double d = std::abs(ours.objective - ref.objective) / (1.0 + std::abs(ref.objective));
    worst = std::max(worst, d);
    if (d > 1e-6) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0, "100 instances (" + std::to_string(optimal) + " optimal), " + std::to_string(mismatches) +
                                              " mismatches, max rel diff " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Verdict lp_duality() {
  int checked = 0;
  double worst = 0.0;
  bool ok = true;
  auto check = [&](const milp::MILPInstance& inst) {
    const auto lp = milp::solve_lp(inst);
    if (lp.status != SolveStatus::Optimal) return;
    ++checked;
    const double gap = std::abs(lp.objective - lp.dual_objective) / (1.0 + std::abs(lp.objective));
    worst = std::max(worst, gap);
    ok = ok && gap <= 1e-7;
  };
  for (std::uint64_t seed = 5000; seed < 5100; ++seed) check(testing::random_milp(seed, shape_for(seed)));
  check(model::build_model(desk()).instance);
  check(model::build_model(testing::hydrogen_system()).instance);
  return {ok && checked > 90, std::to_string(checked) + " LP relaxations incl. desk, max |primal-dual|/(1+|primal|) " + fmt("%.2e", worst)};
}

Verdict feasibility() {
  double worst = 0.0;
  int checked = 0;
  bool ok = true;
  auto check = [&](const milp::MILPInstance& inst, bool must_solve) {
    const auto sol = milp::solve_milp(inst, tight());
    if (!sol.has_incumbent) {
      ok = ok && !must_solve;
      return;
    }
    ++checked;
    const double r = milp::validate_solution(inst, sol.values).max_residual();
    worst = std::max(worst, r);
    ok = ok && r <= 1e-6;
  };
  for (std::uint64_t seed = 5000; seed < 5100; ++seed) check(testing::random_milp(seed, shape_for(seed)), false);
  check(model::build_model(desk()).instance, true);
  auto capped = desk();
  capped.policy.co2_cap = 0.0;
  check(model::build_model(capped).instance, true);
  return {ok, std::to_string(checked) + " solutions incl. desk, max residual " + fmt("%.2e", worst)};
}

Verdict zero_cap() {
  auto sys = desk();
  sys.policy.co2_cap = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = model::build_model(sys);
  const auto sol = milp::solve_milp(m.instance);
  const double secs = seconds_since(t0);
  if (!sol.has_incumbent) return {false, "no solution (" + std::string(milp::to_string(sol.status)) + ")"};
  const double pg = max_turbine_output(m, sol.values);
  const double r = milp::validate_solution(m.instance, sol.values).max_residual();
  return {sol.status == SolveStatus::Optimal && pg <= 1e-7 && r <= 1e-6 && secs < 30.0,
          "max turbine output " + fmt("%.1e", pg) + " MW, residual " + fmt("%.1e", r) + ", " + fmt("%.1f", secs) + " s"};
}

bool monotone(const std::vector<analysis::SweepRow>& rows, double analysis::SweepRow::*field, int direction, std::string& where) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].*field, b = rows[i].*field;
    const double tol = 1e-6 * (1.0 + std::abs(a));
    if ((direction > 0 && b < a - tol) || (direction < 0 && b > a + tol)) {
      where = "at parameter " + fmt("%g", rows[i].parameter);
      return false;
    }
  }
  return true;
}

bool all_feasible(const std::vector<analysis::SweepRow>& rows) {
  for (const auto& r : rows) {
    if (!r.feasible) return false;
  }
  return !rows.empty();
}

Verdict tax_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = analysis::sweep_co2_tax(desk(), analysis::linear_grid(55, 500, 5));
  const double secs = seconds_since(t0);
  std::string where;
  const bool em = monotone(r.rows, &analysis::SweepRow::emissions_mt, -1, where);
  const bool cost = em && monotone(r.rows, &analysis::SweepRow::cost, +1, where);
  const bool ok = all_feasible(r.rows) && r.rows.size() == 90 && em && cost && secs < 600.0;
  return {ok, std::to_string(r.rows.size()) + " points, emissions " + fmt("%.4f", r.rows.front().emissions_mt) + " -> " +
                  fmt("%.4f", r.rows.back().emissions_mt) + " Mt, " + (em && cost ? "monotone" : "not monotone " + where) + ", " +
                  fmt("%.0f", secs) + " s"};
}

Verdict budget_sweep() {
  const auto sys = desk();
  const auto r = analysis::sweep_co2_budget(sys, analysis::budget_fractions(0.05));
  std::string where;
  // Rows run from the loosest cap to the tightest, so cost may only rise.
  const bool cost = monotone(r.rows, &analysis::SweepRow::cost, +1, where);
  bool zero = false;
  double pg = -1.0;
  if (!r.rows.empty() && r.rows.back().parameter == 0.0 && r.rows.back().feasible) {
    auto capped = sys;
    capped.policy.co2_cap = 0.0;
    const auto m = model::build_model(capped);
    const auto sol = milp::solve_milp(m.instance, analysis::SweepOptions{}.solver);
    pg = sol.has_incumbent ? max_turbine_output(m, sol.values) : -1.0;
    zero = r.rows.back().emissions_mt == 0.0 && pg >= 0.0 && pg <= 1e-7 && rel_close(sol.objective, r.rows.back().cost, 1e-9);
  }
  return {all_feasible(r.rows) && r.rows.size() == 21 && cost && zero,
          std::to_string(r.rows.size()) + " caps from " + fmt("%.0f", r.base_emissions_t) + " t, cost " + (cost ? "monotone" : "not monotone " + where) +
              ", cap 0 turbine output " + fmt("%.1e", pg) + " MW"};
}

Verdict pfs_sweep() {
  const auto r = analysis::sweep_pfs_capacity(desk(), analysis::linear_grid(0, 1000, 10), 300.0);
  std::string where;
  const bool cost = monotone(r.rows, &analysis::SweepRow::cost, -1, where);
  const auto sat = analysis::saturation_point(r.rows);
  const bool ok = all_feasible(r.rows) && cost && sat.has_value() && *sat < r.rows.back().parameter;
  return {ok, std::to_string(r.rows.size()) + " limits, cost " + (cost ? "non-increasing" : "rises " + where) + ", saturation " +
                  (sat ? fmt("%g", *sat) + " MW" : std::string("none"))};
}

Verdict energy_closure() {
  double worst = 0.0;
  std::vector<std::string> names;
  for (const auto& sys : {desk(), testing::hydrogen_system(), fields66_system()}) {
    const auto m = model::build_model(sys);
    const auto sol = milp::solve_milp(m.instance);
    if (!sol.has_incumbent) return {false, sys.name + " has no solution"};
    const auto ledger = analysis::compute_energy_loss(sys, m, sol.values);
    const auto audit = analysis::audit_energy(sys, m, sol.values);
    worst = std::max(worst, std::abs(audit.implied_loss() - ledger.total) / audit.inputs());
    names.push_back(sys.name);
  }
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  return {worst <= 1e-6, list + ": max |audit - ledger| / inputs " + fmt("%.2e", worst)};
}

Verdict mps_dual_path() {
  const fs::path dir = fs::temp_directory_path() / "oeh_acceptance_mps";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::pair<std::string, milp::MILPInstance>> fixtures;
  for (std::uint64_t seed = 7000; fixtures.size() < 14; ++seed) {
    testing::RandomShape shape;
    fixtures.emplace_back("random-" + std::to_string(seed), testing::random_milp(seed, shape));
  }
  auto add = [&](const std::string& name, const model::EnergySystem& sys) { fixtures.emplace_back(name, model::build_model(sys).instance); };
  add("desk", desk());
  auto taxed = desk();
  taxed.policy.co2_tax = 300.0;
  add("desk-tax300", taxed);
  auto capped = desk();
  capped.policy.co2_cap = 0.0;
  add("desk-cap0", capped);
  add("hydrogen", testing::hydrogen_system());
  add("shore", testing::shore_fed_platform(10.0, 50.0));
  add("wind-fed", testing::wind_fed_platform(20.0, 0.95, 10.0, 30.0));

  double worst = 0.0;
  int bad = 0;
  for (const auto& [name, inst] : fixtures) {
    const fs::path file = dir / (name + ".mps");
    {
      std::ofstream out(file);
      milp::write_mps(inst, out);
    }
    const auto back = milp::read_mps_file(file);
    const auto a = milp::solve_milp(inst, tight());
    const auto b = milp::solve_milp(back, tight());
    if (a.status != b.status || !a.has_incumbent) {
      ++bad;
      continue;
    }
    const double d = std::abs(a.objective - b.objective) / (1.0 + std::abs(a.objective));
    worst = std::max(worst, d);
    if (d > 1e-5) ++bad;
  }
  fs::remove_all(dir);
  return {bad == 0 && fixtures.size() == 20,
          std::to_string(fixtures.size()) + " fixtures, " + std::to_string(bad) + " disagreements, max rel diff " + fmt("%.2e", worst)};
}

Verdict clustering() {
  std::vector<aggregation::FieldRecord> planted;
  const double dlon = 500.0 / (6371.0 * std::cos(58.0 * M_PI / 180.0)) * 180.0 / M_PI;
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < 8; ++j) {
      aggregation::FieldRecord f;
      f.id = "Q" + std::to_string(c) + std::to_string(j);
      f.lat = 58.0 + 0.05 * (j % 4) - 0.08;
      f.lon = 2.0 + c * dlon + 0.07 * (j / 4) - 0.03 * (j % 3);
      planted.push_back(f);
    }
  }
  aggregation::ClusterOptions opt;
  opt.k = 2;
  opt.seed = 11;
  const auto pr = aggregation::cluster_fields(planted, opt);
  bool recovered = pr.clusters.size() == 2;
  for (std::size_t i = 0; i < planted.size() && recovered; ++i) recovered = pr.assignment[i] == (i < 8 ? 0 : 1);
  const auto sys = fields66_system();
  const bool valid = model::validate_system(sys).empty();
  return {recovered && sys.locations.size() == 15 && valid,
          std::string("planted pair ") + (recovered ? "recovered" : "not recovered") + ", 66 fields with k=5 -> " +
              std::to_string(sys.locations.size()) + " regions" + (valid ? "" : " (invalid)")};
}

Verdict reaggregation() {
  const auto fields = aggregation::read_fields_csv(kData / "fields66" / "fields.csv");
  const auto profiles = aggregation::generate_profiles(fields, aggregation::read_templates_csv(kData / "fields66" / "templates.csv"), 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (auto s : aggregation::kAllStreams) {
      const auto sums = aggregation::monthly_sums(profiles[i].series(s));
      for (std::size_t m = 0; m < 12; ++m) {
        const double want = fields[i].totals(s)[m];
        if (want > 0.0) worst = std::max(worst, std::abs(sums[m] - want) / want);
        else worst = std::max(worst, std::abs(sums[m]));
      }
    }
  }
  return {worst <= 1e-3, std::to_string(fields.size()) + " fields x 6 streams x 12 months, max rel error " + fmt("%.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"milp-oracle-equivalence", milp_oracle},
      {"lp-duality", lp_duality},
      {"solution-feasibility", feasibility},
      {"zero-cap-desk", zero_cap},
      {"tax-sweep-monotone", tax_sweep},
      {"budget-sweep-monotone", budget_sweep},
      {"pfs-sweep-saturation", pfs_sweep},
      {"energy-closure", energy_closure},
      {"mps-dual-path", mps_dual_path},
      {"clustering", clustering},
      {"profile-reaggregation", reaggregation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
