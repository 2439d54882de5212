#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "oeh/aggregation/fields.hpp"
#include "oeh/analysis/report.hpp"
#include "oeh/cli/app.hpp"
#include "oeh/io/csv.hpp"
#include "oeh/milp/mps.hpp"
#include "oeh/milp/solver.hpp"
#include "oeh/model/io.hpp"
#include "tiny_systems.hpp"

namespace fs = std::filesystem;
using namespace oeh;
using nlohmann::json;

namespace {

const fs::path kData = OEH_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run oehplan(std::vector<std::string> args) {
  args.insert(args.begin(), "oehplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Fresh scratch directory per test.
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("oeh_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Copy of the desk fixture that tests may damage.
fs::path desk_copy(const std::string& name) {
  const auto dir = scratch(name);
  for (const auto& e : fs::directory_iterator(kData / "desk")) fs::copy_file(e.path(), dir / e.path().filename());
  return dir;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = io::read_text_file(e.path());
  return files;
}

json read_json(const fs::path& p) { return json::parse(io::read_text_file(p)); }

std::string desk_system() { return (kData / "desk" / "system.json").string(); }

}  // namespace

TEST_SUITE("cli validate") {
  TEST_CASE("desk fixture validates") {
    const auto r = oehplan({"validate", "--system", desk_system()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("0 problem(s)") != std::string::npos);
  }

  TEST_CASE("missing profile column is named") {
    const auto dir = desk_copy("missing_profile");
    std::string flows = io::read_text_file(dir / "flows.csv");
    flows.replace(flows.find("P1.oil"), 6, "P1.oyl");
    io::write_text_file(dir / "flows.csv", flows);
    const auto r = oehplan({"validate", "--system", (dir / "system.json").string()});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("P1.oil") != std::string::npos);
  }

  TEST_CASE("corrupt CSV reports its line") {
    const auto dir = desk_copy("corrupt_csv");
    std::string flows = io::read_text_file(dir / "flows.csv");
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) pos = flows.find('\n', pos) + 1;
    flows.insert(pos, "1.2.3");
    io::write_text_file(dir / "flows.csv", flows);
    const auto r = oehplan({"validate", "--system", (dir / "system.json").string()});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("flows.csv:4") != std::string::npos);
  }

  TEST_CASE("missing input file is an I/O error") {
    const auto r = oehplan({"validate", "--system", "/nonexistent/system.json"});
    CHECK(r.code == cli::kIo);
  }

  TEST_CASE("usage errors") {
    CHECK(oehplan({}).code != cli::kOk);
    CHECK(oehplan({"solve", "--bogus"}).code == cli::kValidation);
    CHECK(oehplan({"validate"}).code == cli::kValidation);
    const auto dir = scratch("usage");
    CHECK(oehplan({"sweep", "--system", desk_system(), "--tax-range", "9:1:1", "--out", dir.string()}).code == cli::kValidation);
    CHECK(oehplan({"sweep", "--system", desk_system(), "--kind", "carbon", "--out", dir.string()}).code == cli::kValidation);
  }
}

TEST_SUITE("cli cluster") {
  TEST_CASE("fixture with k = 5 gives five hubs and fifteen regions") {
    const auto dir = scratch("cluster5");
    const auto r = oehplan({"cluster", "--fields", (kData / "fields66" / "fields.csv").string(), "--templates",
                            (kData / "fields66" / "templates.csv").string(), "--sites", (kData / "fields66" / "onshore_sites.csv").string(),
                            "--k", "5", "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const auto hubs = io::read_text_file(dir / "hubs.csv");
    CHECK(std::count(hubs.begin(), hubs.end(), '\n') == 6);
    const auto sys = model::load_system(dir / "hub_spoke.json");
    CHECK(sys.locations.size() == 15);
    CHECK(model::validate_system(sys).empty());
    const auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest["command"] == "cluster");
    CHECK(manifest["exit_code"] == 0);
    CHECK(manifest["outputs"].size() == 5);
  }

  TEST_CASE("k = 1 gives a single hub") {
    const auto dir = scratch("cluster1");
    auto fields = aggregation::read_fields_csv(kData / "fields66" / "fields.csv");
    fields.resize(5);
    io::write_text_file(dir / "few.csv", aggregation::format_fields_csv(fields));
    const auto out = dir / "out";
    const auto r = oehplan({"cluster", "--fields", (dir / "few.csv").string(), "--k", "1", "--out", out.string()});
    REQUIRE(r.code == cli::kOk);
    const auto hubs = io::read_text_file(out / "hubs.csv");
    CHECK(std::count(hubs.begin(), hubs.end(), '\n') == 2);
    CHECK(model::load_system(out / "hub_spoke.json").locations.size() == 3);
  }

  TEST_CASE("spoke limit violation fails with the field list") {
    const auto dir = scratch("cluster_far");
    const auto r = oehplan({"cluster", "--fields", (kData / "fields66" / "fields.csv").string(), "--k", "1", "--out", dir.string()});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("F01") != std::string::npos);
  }

  TEST_CASE("same seed, same bytes") {
    const auto dir = scratch("cluster_seed");
    const std::vector<std::string> args{"cluster", "--fields", (kData / "fields66" / "fields.csv").string(), "--templates",
                                        (kData / "fields66" / "templates.csv").string(), "--seed", "17", "--out", dir.string()};
    REQUIRE(oehplan(args).code == cli::kOk);
    const auto first = snapshot(dir);
    fs::remove_all(dir);
    REQUIRE(oehplan(args).code == cli::kOk);
    CHECK(snapshot(dir) == first);
  }
}

TEST_SUITE("cli solve") {
  TEST_CASE("internal solve, export and external import agree") {
    const auto dir = scratch("solve");
    const auto internal = dir / "internal";
    const auto r = oehplan({"solve", "--system", desk_system(), "--gap", "1e-9", "--out", internal.string()});
    REQUIRE(r.code == cli::kOk);
    const auto report = read_json(internal / "report.json");
    const double objective = report["objective"].get<double>();

    const auto exported = dir / "export";
    REQUIRE(oehplan({"solve", "--system", desk_system(), "--solver", "export", "--out", exported.string()}).code == cli::kOk);
    const auto inst = milp::read_mps_file(exported / "model.mps");
    milp::SolverConfig cfg;
    cfg.optimality_gap = 1e-9;
    const auto sol = milp::solve_milp(inst, cfg);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    CHECK(std::abs(sol.objective - objective) <= 1e-5 * (1.0 + std::abs(objective)));

    const auto imported = dir / "import";
    const auto r2 = oehplan({"solve", "--system", desk_system(), "--solver", "export", "--solution", (internal / "solution.txt").string(),
                             "--out", imported.string()});
    REQUIRE(r2.code == cli::kOk);
    CHECK(read_json(imported / "report.json")["objective"].get<double>() == doctest::Approx(objective).epsilon(1e-12));
    CHECK(io::read_text_file(imported / "capacities.csv") == io::read_text_file(internal / "capacities.csv"));
  }

  TEST_CASE("a bad external solution is rejected") {
    const auto dir = scratch("bad_solution");
    io::write_text_file(dir / "sol.txt", "xAcc[nothing] 1\n");
    const auto r = oehplan({"solve", "--system", desk_system(), "--solver", "export", "--solution", (dir / "sol.txt").string(), "--out",
                            (dir / "out").string()});
    CHECK(r.code == cli::kValidation);
  }

  TEST_CASE("zero cap without investables is infeasible") {
    const auto dir = scratch("infeasible");
    model::save_system(testing::lone_platform(5.0), dir, "lone");
    const auto out = dir / "out";
    const auto r = oehplan({"solve", "--system", (dir / "lone.json").string(), "--co2-cap", "0", "--out", out.string()});
    CHECK(r.code == cli::kInfeasible);
    CHECK(read_json(out / "report.json")["status"] == "Infeasible");
    CHECK(read_json(out / "manifest.json")["exit_code"] == 2);
  }
}

TEST_SUITE("cli sweep") {
  TEST_CASE("defaults follow the published protocol") {
    const cli::RunConfig c;
    CHECK(cli::format_range(c.tax) == "55:500:5");
    CHECK(c.budget_step_pct == 5.0);
    CHECK(cli::format_range(c.pfs) == "0:1000:10");
    CHECK(c.fixed_tax == 300.0);
    const auto r = cli::parse_range("1.5:3:0.5");
    CHECK(r.lo == 1.5);
    CHECK(r.hi == 3.0);
    CHECK(r.step == 0.5);
    CHECK_THROWS_AS(cli::parse_range("1:2"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_range("1:2:0"), std::invalid_argument);
  }

  TEST_CASE("a one-point sweep equals solve") {
    const auto dir = scratch("sweep_one");
    model::save_system(testing::hydrogen_system(), dir, "h2");
    const auto sys = (dir / "h2.json").string();
    REQUIRE(oehplan({"solve", "--system", sys, "--co2-tax", "150", "--gap", "1e-10", "--out", (dir / "solve").string()}).code == cli::kOk);
    REQUIRE(oehplan({"sweep", "--system", sys, "--kind", "tax", "--tax-range", "150:150:5", "--out", (dir / "sweep").string()}).code ==
            cli::kOk);
    const auto rows = analysis::parse_sweep_csv(io::read_text_file(dir / "sweep" / "tax_sweep.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].parameter == 150.0);
    const double objective = read_json(dir / "solve" / "report.json")["objective"].get<double>();
    CHECK(rows[0].cost == doctest::Approx(objective).epsilon(1e-9));
  }

  TEST_CASE("sweep output is deterministic") {
    const auto dir = scratch("sweep_det");
    model::save_system(testing::shore_fed_platform(10.0, 50.0), dir, "shore");
    const std::vector<std::string> args{"sweep", "--system", (dir / "shore.json").string(), "--kind", "pfs", "--pfs-range", "0:20:5",
                                        "--out", (dir / "out").string()};
    REQUIRE(oehplan(args).code == cli::kOk);
    const auto first = snapshot(dir / "out");
    CHECK(first.size() == 4);
    fs::remove_all(dir / "out");
    REQUIRE(oehplan(args).code == cli::kOk);
    CHECK(snapshot(dir / "out") == first);
    const auto summary = read_json(dir / "out" / "pfs_sweep_summary.json");
    CHECK(summary["saturation"] == 10.0);
  }

  TEST_CASE("flags override the config file") {
    const auto dir = scratch("config");
    model::save_system(testing::shore_fed_platform(10.0, 50.0), dir, "shore");
    io::write_text_file(dir / "run.json", R"({"system": "shore.json", "kind": "budget", "budget_steps": 50, "out": "from_config",
 "co2_tax": 100})");
    const auto r = oehplan({"sweep", "--config", (dir / "run.json").string(), "--co2-tax", "200"});
    REQUIRE(r.code == cli::kOk);
    const auto manifest = read_json(dir / "from_config" / "manifest.json");
    CHECK(manifest["config"]["co2_tax"] == 200.0);
    CHECK(manifest["config"]["kind"] == "budget");
    CHECK(manifest["config"]["tax_range"] == "55:500:5");
    CHECK(manifest["config"]["pfs_range"] == "0:1000:10");
    const auto rows = analysis::parse_sweep_csv(io::read_text_file(dir / "from_config" / "budget_sweep.csv"));
    CHECK(rows.size() == 3);

    io::write_text_file(dir / "bad.json", R"({"sytem": "shore.json"})");
    const auto bad = oehplan({"validate", "--config", (dir / "bad.json").string()});
    CHECK(bad.code == cli::kValidation);
    CHECK(bad.err.find("sytem") != std::string::npos);
  }
}
