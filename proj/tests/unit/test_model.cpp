#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "lp_oracle.hpp"
#include "oeh/model/io.hpp"
#include "oeh/model/operational.hpp"
#include "oeh/model/registry.hpp"
#include "tiny_systems.hpp"

using namespace oeh;
using namespace oeh::model;
using milp::SolveStatus;
using testing::build_and_solve;
using testing::value_of;

namespace {

std::string period(const std::string& prefix, const std::string& who, int t) {
  return prefix + "[" + who + "," + std::to_string(t) + "]";
}

EnergySystem desk() { return load_system(std::string(OEH_DATA_DIR) + "/desk/system.json"); }

milp::SolverConfig tight() {
  milp::SolverConfig c;
  c.optimality_gap = 1e-9;
  return c;
}

const milp::LinearConstraint& row(const milp::MILPInstance& inst, const std::string& name) {
  for (const auto& r : inst.constraints()) {
    if (r.name == name) return r;
  }
  FAIL("no row " << name);
  return inst.constraints().front();
}

double coefficient(const milp::LinearConstraint& r, milp::VarId v) {
  for (const auto& t : r.terms) {
    if (t.var == v) return t.coef;
  }
  return 0.0;
}

TechnologySpec battery_at(const std::string& loc, double hist, double max_cap, int max_units) {
  TechnologySpec t;
  t.id = "bat";
  t.kind = TechnologyKind::Battery;
  t.efficiency = 0.9;
  t.unit_max = 3.0;
  t.unit_inv_cost = 100.0;
  t.fixed_inv_cost = 10.0;
  TechnologySite s;
  s.location = loc;
  s.hist_cap = hist;
  s.max_cap = max_cap;
  s.max_units = max_units;
  t.sites.push_back(s);
  return t;
}

}  // namespace

TEST_SUITE("electricity") {
  TEST_CASE("lone platform at 10 MW runs its turbine at demand") {
    const auto sys = testing::lone_platform(10.0);
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < 4; ++t) {
      const double pg = value_of(s, period("pG", "P.GT", t));
      CHECK(pg == doctest::Approx(10.0).epsilon(1e-9));
      CHECK(pg / 0.33 == doctest::Approx(30.303).epsilon(1e-4));
    }
  }

  TEST_CASE("zero emission cap shuts every turbine") {
    auto sys = testing::wind_fed_platform(5.0, 1.0, 20.0, 20.0);
    sys.locations[0].platform->turbines[0].fuel_cost = 0.0;
    sys.policy.co2_cap = 0.0;
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < 2; ++t) CHECK(std::abs(value_of(s, period("pG", "P.GT", t))) < 1e-9);

    auto short_wind = testing::wind_fed_platform(5.0, 1.0, 20.0, 1.0);
    short_wind.policy.co2_cap = 0.0;
    CHECK(build_and_solve(short_wind).solution.status == SolveStatus::Infeasible);
  }

  TEST_CASE("line losses on a two-node system") {
    const double eta = 0.95;
    const auto sys = testing::wind_fed_platform(5.0, eta, 20.0, 5.0 / eta);
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < 2; ++t) {
      CHECK(value_of(s, period("pLfwd", "H-P", t)) == doctest::Approx(5.0 / eta).epsilon(1e-9));
      CHECK(std::abs(value_of(s, period("pLbwd", "H-P", t))) < 1e-9);
      CHECK(std::abs(value_of(s, period("pG", "P.GT", t))) < 1e-9);
    }
  }

  TEST_CASE("turbine cost coefficient") {
    GasTurbineSpec g;
    g.efficiency = 0.33;
    g.fuel_emission = 0.2;
    CHECK(turbine_cost_coefficient(g, 300.0, 1.0, 1.0) == doctest::Approx(300.0 * 0.2 / 0.33));
    CHECK(turbine_cost_coefficient(g, 300.0, 1.0, 1.0) == doctest::Approx(181.8).epsilon(1e-3));
    g.var_cost = 1.0;
    CHECK(turbine_cost_coefficient(g, 0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(turbine_cost_coefficient(g, 0.0, 730.0, 2.0) == doctest::Approx(1460.0));
  }

  TEST_CASE("spinning reserve covers sigma of demand") {
    const auto sys = testing::hydrogen_system();
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    const double cap = sys.locations[0].platform->turbines[0].capacity;
    for (int t = 0; t < sys.time.num_periods(); ++t) {
      const double pg = value_of(s, period("pG", "P.GT", t));
      const double res = value_of(s, period("pResG", "P.GT", t)) + value_of(s, period("pResSE", "battery.P", t));
      const double pd = value_of(s, period("pD", "P", t));
      CHECK(pg + value_of(s, period("pResG", "P.GT", t)) <= cap + 1e-7);
      CHECK(sys.reserve.sigma * pd <= res + 1e-7);
    }
  }

  TEST_CASE("isolated hub is a build error") {
    auto sys = testing::lone_platform(1.0);
    Location hub2;
    hub2.id = "H2";
    hub2.kind = LocationKind::Hub;
    hub2.hub = HubSpec{};
    sys.locations.push_back(hub2);
    CHECK_THROWS_AS(build_model(sys), BuildError);
    const auto diags = validate_system(sys);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "isolated-hub");
    CHECK(diags[0].subject == "H2");
  }
}

TEST_SUITE("production") {
  TEST_CASE("oil pump power is linear in volume") {
    auto sys = testing::lone_platform(2.0);
    auto& pr = sys.locations[0].platform->process;
    pr.pump_oil_coeff = 2e-6;
    for (auto& v : sys.locations[0].platform->flows.oil) v = 1e6;
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    CHECK(value_of(s, period("pPO", "P", 0)) == doctest::Approx(2.0));
  }

  TEST_CASE("compressor power follows the polytropic bracket") {
    auto sys = testing::lone_platform(1.0);
    auto& ps = *sys.locations[0].platform;
    ps.process.export_compressor_cap = 1.0;
    ps.process.head_density_coeff = 1e-7;
    ps.process.compression_ratio = 3.0;
    ps.process.polytropic_exponent = 1.4;
    for (auto& v : ps.flows.gas_export) v = 1e6;
    const double expected = 1e6 * 1e-7 * (std::pow(3.0, 0.4 / 1.4) - 1.0);
    CHECK(expected == doctest::Approx(0.0369).epsilon(1e-3));
    CHECK(ps.process.compression_bracket() == doctest::Approx(std::pow(3.0, 0.4 / 1.4) - 1.0));
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    CHECK(value_of(s, period("pCExp", "P", 2)) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(value_of(s, period("pD", "P", 2)) == doctest::Approx(1.0 + expected).epsilon(1e-9));
  }

  TEST_CASE("zero flows give zero demand and zero heat") {
    auto sys = testing::lone_platform(3.0);
    auto& ps = *sys.locations[0].platform;
    ps.process.separator_cap = 1.0;
    ps.process.separator_heat_coeff = 1e-6;
    for (auto& v : ps.flows.oil) v = 0.0;
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < 4; ++t) {
      CHECK(std::abs(value_of(s, period("pD", "P", t))) < 1e-12);
      CHECK(std::abs(value_of(s, period("pHSEP", "P", t))) < 1e-12);
      CHECK(std::abs(value_of(s, period("pG", "P.GT", t))) < 1e-12);
    }
  }

  TEST_CASE("missing flow series names platform and series") {
    auto sys = testing::lone_platform(1.0);
    sys.locations[0].platform->flows.water_lift.clear();
    try {
      (void)build_model(sys);
      FAIL("expected BuildError");
    } catch (const BuildError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("profile-length") != std::string::npos);
      CHECK(msg.find("water_lift") != std::string::npos);
      CHECK(msg.find("P:") != std::string::npos);
    }
  }
}

TEST_SUITE("hydrogen") {
  TEST_CASE("electrolysers idle without fuel cells or stores") {
    auto sys = testing::hydrogen_system();
    std::erase_if(sys.technologies, [](const TechnologySpec& t) {
      return t.kind == TechnologyKind::FuelCell || t.kind == TechnologyKind::HydrogenStorage;
    });
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < sys.time.num_periods(); ++t) CHECK(std::abs(value_of(s, period("pE", "electrolyser.H", t))) < 1e-9);
  }

  TEST_CASE("steady-state electrolysis matches fuel-cell draw") {
    const auto sys = testing::hydrogen_system();
    const auto model = build_model(sys);
    const auto& inst = model.instance;
    const auto& r = row(inst, "h2Balance[H,3]");
    const auto pf = *inst.find_variable(period("pF", "fuel_cell.H", 3));
    const auto pe = *inst.find_variable(period("pE", "electrolyser.H", 3));
    // With v+ = v- = 0 the row reads a_F p^F + a_E p^E = 0.
    const double per_mw = -coefficient(r, pf) / coefficient(r, pe);
    const HubSpec hub;
    const double H = sys.time.hour_duration;
    CHECK(per_mw == doctest::Approx(hub.electrolysis_fuel_cell / (0.5 * hub.energy_content) * H));
  }

  TEST_CASE("stored hydrogen telescopes within each slice") {
    const auto sys = testing::hydrogen_system();
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (std::size_t sl = 0; sl < sys.time.slices.size(); ++sl) {
      double in = 0.0, out = 0.0;
      const int start = sys.time.slice_start(sl);
      for (int t = start; t < start + sys.time.slices[sl].hours; ++t) {
        in += value_of(s, period("vSHyIn", "h2_store.H", t));
        out += value_of(s, period("vSHyOut", "h2_store.H", t));
      }
      CHECK(in == doctest::Approx(out).epsilon(1e-7));
    }
  }
}

TEST_SUITE("investment") {
  TEST_CASE("investment cost of one module") {
    auto sys = testing::lone_platform(1.0);
    sys.technologies.push_back(battery_at("P", 0.0, 9.0, 3));
    const auto model = build_model(sys);
    const auto& inst = model.instance;
    std::vector<double> x(inst.num_variables(), 0.0);
    x[static_cast<std::size_t>(*inst.find_variable("xInst[bat.P]"))] = 2.0;
    x[static_cast<std::size_t>(*inst.find_variable("nUnits[bat.P]"))] = 1.0;
    x[static_cast<std::size_t>(*inst.find_variable("xAcc[bat.P]"))] = 2.0;
    CHECK(inst.evaluate_objective(x) == doctest::Approx(210.0));
  }

  TEST_CASE("historical capacity is kept without installs") {
    auto sys = testing::lone_platform(1.0);
    sys.technologies.push_back(battery_at("P", 5.0, 10.0, 0));
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    CHECK(value_of(s, "xAcc[bat.P]") == doctest::Approx(5.0));
  }

  TEST_CASE("module count and maximum capacity bound accumulation") {
    auto sys = testing::lone_platform(1.0);
    auto bat = battery_at("P", 0.0, 5.0, 2);
    bat.unit_inv_cost = 0.0;
    bat.fixed_inv_cost = 0.0;
    sys.technologies.push_back(bat);
    Registry reg(sys);
    build_investment_block(reg);
    const auto acc = reg.capacities().front().accumulated;
    reg.builder().add_objective(acc, -1.0);
    const auto inst = reg.builder().build();
    const auto sol = milp::solve_milp(inst);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const auto oracle = testing::oracle_milp(inst);
    REQUIRE(oracle.status == SolveStatus::Optimal);
    CHECK(-oracle.objective == doctest::Approx(std::min(2 * 3.0, 5.0)));
    CHECK(sol.values[static_cast<std::size_t>(acc)] == doctest::Approx(5.0));
  }

  TEST_CASE("investable technology needs a module size") {
    auto sys = testing::lone_platform(1.0);
    auto bat = battery_at("P", 0.0, 5.0, 2);
    bat.unit_max = 0.0;
    sys.technologies.push_back(bat);
    CHECK_THROWS_AS(build_model(sys), BuildError);
    Registry reg(sys);
    CHECK_THROWS_AS(build_investment_block(reg), BuildError);
  }
}

TEST_SUITE("capacity links") {
  TEST_CASE("zero capacity forces linked operation to zero") {
    auto sys = testing::lone_platform(2.0);
    sys.technologies.push_back(battery_at("P", 0.0, 0.0, 0));
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (int t = 0; t < 4; ++t) {
      CHECK(value_of(s, period("pLfwd", "H-P", t)) == 0.0);
      CHECK(value_of(s, period("pLbwd", "H-P", t)) == 0.0);
      CHECK(value_of(s, period("pSEin", "bat.P", t)) == 0.0);
      CHECK(value_of(s, period("pSEout", "bat.P", t)) == 0.0);
    }
  }

  TEST_CASE("a 10 MW line carries 10 MW either way") {
    auto fwd = testing::wind_fed_platform(20.0, 1.0, 10.0, 30.0);
    const auto a = build_and_solve(fwd);
    REQUIRE(a.solution.status == SolveStatus::Optimal);
    CHECK(value_of(a, period("pLfwd", "H-P", 0)) == doctest::Approx(10.0));

    auto bwd = fwd;
    std::swap(bwd.branches[0].from, bwd.branches[0].to);
    const auto b = build_and_solve(bwd);
    REQUIRE(b.solution.status == SolveStatus::Optimal);
    CHECK(value_of(b, period("pLbwd", "H-P", 0)) == doctest::Approx(10.0));
    CHECK(b.solution.objective == doctest::Approx(a.solution.objective));
  }

  TEST_CASE("a binding line capacity changes the optimum") {
    const auto linked = build_and_solve(testing::wind_fed_platform(20.0, 1.0, 10.0, 30.0));
    const auto loose = build_and_solve(testing::wind_fed_platform(20.0, 1.0, 1e4, 30.0));
    REQUIRE(linked.solution.status == SolveStatus::Optimal);
    REQUIRE(loose.solution.status == SolveStatus::Optimal);
    CHECK(std::abs(value_of(loose, period("pG", "P.GT", 0))) < 1e-9);
    CHECK(value_of(linked, period("pG", "P.GT", 0)) == doctest::Approx(10.0));
    CHECK(linked.solution.objective > loose.solution.objective + 1.0);
  }
}

TEST_SUITE("validation") {
  TEST_CASE("desk fixture is clean") { CHECK(validate_system(desk()).empty()); }

  TEST_CASE("profile length mismatch is named") {
    auto sys = desk();
    auto& loc = *std::find_if(sys.locations.begin(), sys.locations.end(), [](const Location& l) { return l.platform.has_value(); });
    loc.platform->flows.oil.pop_back();
    const auto diags = validate_system(sys);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "profile-length");
    CHECK(diags[0].subject == loc.id);
    CHECK(diags[0].message.find("oil") != std::string::npos);
  }

  TEST_CASE("disconnected platform") {
    auto sys = testing::lone_platform(1.0);
    sys.branches.clear();
    sys.locations.pop_back();
    const auto diags = validate_system(sys);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "connectivity");
    CHECK(diags[0].subject == "P");
  }
}

TEST_SUITE("model properties") {
  TEST_CASE("no modules keeps every capacity at its history") {
    auto sys = desk();
    for (auto& t : sys.technologies) {
      for (auto& s : t.sites) s.max_units = 0;
    }
    for (auto& b : sys.branches) b.max_cables = 0;
    const auto s = build_and_solve(sys);
    REQUIRE(s.solution.status == SolveStatus::Optimal);
    for (const auto& h : s.model.index.capacities) {
      const auto& site = sys.technologies[h.technology].sites[h.site];
      CHECK(s.solution.values[static_cast<std::size_t>(h.accumulated)] == doctest::Approx(site.hist_cap));
    }
  }

  TEST_CASE("dearer investment never lowers the optimum") {
    const auto base = desk();
    auto dear = base;
    for (auto& t : dear.technologies) t.unit_inv_cost *= 2.0;
    const auto a = build_and_solve(base, tight());
    const auto b = build_and_solve(dear, tight());
    REQUIRE(a.solution.status == SolveStatus::Optimal);
    REQUIRE(b.solution.status == SolveStatus::Optimal);
    CHECK(b.solution.objective >= a.solution.objective * (1.0 - 1e-9));
  }

  TEST_CASE("a higher carbon tax never lowers the optimum") {
    auto low = desk();
    low.policy.co2_tax = 55.0;
    auto high = low;
    high.policy.co2_tax = 150.0;
    const auto a = build_and_solve(low, tight());
    const auto b = build_and_solve(high, tight());
    REQUIRE(a.solution.status == SolveStatus::Optimal);
    REQUIRE(b.solution.status == SolveStatus::Optimal);
    CHECK(b.solution.objective >= a.solution.objective * (1.0 - 1e-9));
  }
}
