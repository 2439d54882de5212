#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lp_oracle.hpp"
#include "oeh/milp/mps.hpp"
#include "oeh/milp/solver.hpp"
#include "oeh/milp/validation.hpp"
#include "random_instances.hpp"

using namespace oeh;
using milp::Sense;
using milp::SolveStatus;

TEST_CASE("empty instance writes header and empty sections") {
  milp::MILPInstance empty;
  CHECK(milp::write_mps(empty) == "NAME          OEHPLAN\nROWS\n N  COST\nCOLUMNS\nRHS\nRANGES\nBOUNDS\nENDATA\n");
}

TEST_CASE("one variable one row fixture") {
  milp::InstanceBuilder b;
  auto x = b.add_variable("flow out", 0, 10);
  b.add_constraint("cap", {{x, 2.5}}, Sense::LessEqual, 20);
  b.add_objective(x, -1);
  const std::string expected =
      "NAME          OEHPLAN\n"
      "*@C C0000000 flow out\n"
      "*@R R0000000 cap\n"
      "ROWS\n"
      " N  COST\n"
      " L  R0000000\n"
      "COLUMNS\n"
      "    C0000000  COST      -1\n"
      "    C0000000  R0000000  2.5\n"
      "RHS\n"
      "    RHS       R0000000  20\n"
      "RANGES\n"
      "BOUNDS\n"
      " UP BND       C0000000  10\n"
      "ENDATA\n";
  CHECK(milp::write_mps(b.build()) == expected);
}

TEST_CASE("numbers fit the 12 character field") {
  for (double v : {1.0 / 3.0, -2.0 / 3.0e7, 123456789.123456, -1e-300, 6.02214076e23, 0.1, -0.000123456789123}) {
    const auto s = milp::format_mps_number(v);
    CHECK(s.size() <= 12);
    CHECK(std::abs(std::stod(s) - v) <= 1e-7 * std::abs(v));
  }
  CHECK(milp::format_mps_number(0.25) == "0.25");
  CHECK(milp::format_mps_number(-1e6) == "-1e+06");
  CHECK(milp::format_mps_number(-2.0 / 3.0e7) == "-6.666667e-8");
}

TEST_CASE("round trip preserves names, structure and optimum") {
  milp::SolverConfig cfg;
  cfg.optimality_gap = 1e-9;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = testing::random_milp(500 + seed);
    const auto text = milp::write_mps(inst);
    auto back = milp::read_mps(text);
    REQUIRE(back.num_variables() == inst.num_variables());
    REQUIRE(back.num_constraints() == inst.num_constraints());
    CHECK(back.variable(0).name == inst.variable(0).name);
    CHECK(back.num_integral() == inst.num_integral());
    CHECK(milp::write_mps(back) == text);
    auto a = milp::solve_milp(inst, cfg);
    auto c = milp::solve_milp(back, cfg);
    REQUIRE(a.status == c.status);
    if (a.status == SolveStatus::Optimal) CHECK(std::abs(a.objective - c.objective) <= 1e-6 * std::max(1.0, std::abs(a.objective)));
  }
}

TEST_CASE("parse errors carry line and column") {
  try {
    milp::read_mps("NAME x\nCOLUMNS\n    C1  COST  1\nENDATA\n");
    FAIL("expected a parse error");
  } catch (const milp::MpsParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
  try {
    milp::read_mps("NAME x\nROWS\n N  COST\nCOLUMNS\n    X  COST  abc\nENDATA\n");
    FAIL("expected a parse error");
  } catch (const milp::MpsParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.column() == 14);
  }
  CHECK_THROWS_AS(milp::read_mps("NAME x\n"), milp::MpsParseError);
}

TEST_CASE("external fixture with ranges and markers solves to the enumerated optimum") {
  // max x + 2y + 3z, x + y + z <= 2.5 (ranged to [1, 2.5]), y, z integer in [0, 1], x >= 0.
  const char* text =
      "NAME          EXT\n"
      "OBJSENSE\n"
      "    MAX\n"
      "ROWS\n"
      " N  OBJ\n"
      " L  LIM\n"
      "COLUMNS\n"
      "    X         OBJ       1              LIM       1\n"
      "    MARKER    'MARKER'                 'INTORG'\n"
      "    Y         OBJ       2              LIM       1\n"
      "    Z         OBJ       3              LIM       1\n"
      "    MARKER    'MARKER'                 'INTEND'\n"
      "RHS\n"
      "    RHS       LIM       2.5\n"
      "RANGES\n"
      "    RNG       LIM       1.5\n"
      "BOUNDS\n"
      " UP BND       Y         1\n"
      " UP BND       Z         1\n"
      "ENDATA\n";
  auto inst = milp::read_mps(text);
  CHECK(inst.num_constraints() == 2);
  CHECK(inst.constraints()[1].name == "LIM_range");
  auto ref = testing::oracle_milp(inst);
  auto sol = milp::solve_milp(inst);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(ref.objective));
  CHECK(sol.objective == doctest::Approx(-5.5));
}

TEST_CASE("validation reports residuals") {
  milp::InstanceBuilder b;
  auto x = b.add_variable("x", 0, 5);
  auto y = b.add_variable("y", 0, 5, true);
  b.add_constraint("sum", {{x, 1}, {y, 1}}, Sense::Equal, 4);
  b.add_constraint("lim", {{x, 1}}, Sense::LessEqual, 3);
  b.add_constraint("other", {{y, 2}}, Sense::GreaterEqual, 1);
  b.add_objective(x, 1);
  auto inst = b.build();

  auto zero = milp::validate_solution(inst, std::vector<double>{0.0, 0.0});
  CHECK(zero.row_violations[0] == doctest::Approx(4.0));
  CHECK(zero.row_violations[1] == 0.0);
  CHECK(zero.row_violations[2] == doctest::Approx(1.0));
  CHECK(zero.max_constraint_violation == doctest::Approx(4.0));
  CHECK(zero.mean_constraint_violation == doctest::Approx(5.0 / 3.0));
  CHECK(zero.worst_row == 0);

  auto sol = milp::solve_milp(inst);
  auto ok = milp::validate_solution(inst, sol.values);
  CHECK(ok.max_residual() <= 1e-6);
  auto bumped = sol.values;
  bumped[0] += 1.0;
  auto bad = milp::validate_solution(inst, bumped);
  CHECK(bad.violated_rows(1e-9) == std::vector<std::size_t>{0});

  CHECK_THROWS_WITH_AS(milp::validate_solution(inst, std::vector<double>{1.0}), doctest::Contains("'y'"), milp::SolutionError);
  std::istringstream file("# comment\nx 1.5\n");
  CHECK_THROWS_WITH_AS(milp::values_from_named(inst, milp::read_solution(file)), doctest::Contains("'y'"), milp::SolutionError);
  std::istringstream mangled("C0000000 1\nC0000001 3 # tail\n");
  auto v = milp::values_from_named(inst, milp::read_solution(mangled));
  CHECK(v == std::vector<double>{1.0, 3.0});
}
