#include "oeh/cli/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "oeh/aggregation/hub_and_spoke.hpp"
#include "oeh/analysis/report.hpp"
#include "oeh/io/csv.hpp"
#include "oeh/milp/mps.hpp"
#include "oeh/milp/validation.hpp"
#include "oeh/model/io.hpp"

namespace oeh::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

/// Result of one command besides its exit code, for the manifest.
struct Outcome {
  int code = kOk;
  std::vector<fs::path> outputs;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

fs::path require(const std::optional<fs::path>& p, const char* flag) {
  if (!p) throw UsageError(std::string("missing ") + flag);
  return *p;
}

void write(const fs::path& path, std::string_view text, Outcome& o) {
  io::write_text_file(path, text);
  o.outputs.push_back(path);
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io::IoError("cannot create " + dir.string() + ": " + ec.message());
}

model::EnergySystem load(const RunConfig& c) {
  model::LoadOptions opts;
  opts.profiles_dir = c.profiles;
  model::EnergySystem sys = model::load_system(require(c.system, "--system"), opts);
  if (c.co2_tax) sys.policy.co2_tax = *c.co2_tax;
  if (c.co2_cap) sys.policy.co2_cap = *c.co2_cap;
  return sys;
}

milp::SolverConfig solver_config(const RunConfig& c, double gap) {
  milp::SolverConfig s;
  s.optimality_gap = gap;
  s.node_limit = c.node_limit;
  s.validate();
  return s;
}

void print_diagnostics(const std::vector<model::Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) err << "error: [" << d.code << "] " << d.subject << ": " << d.message << "\n";
}

Outcome cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Outcome o;
  if (!c.system && !c.fields) throw UsageError("validate needs --system and/or --fields");
  std::size_t problems = 0;
  if (c.system) {
    const auto sys = load(c);
    const auto diags = model::validate_system(sys);
    print_diagnostics(diags, err);
    problems += diags.size();
    out << "system " << sys.name << ": " << sys.locations.size() << " locations, " << sys.time.num_periods() << " periods, "
        << diags.size() << " problem(s)\n";
  }
  if (c.fields) {
    const auto fields = aggregation::read_fields_csv(*c.fields);
    out << "fields: " << fields.size() << " records\n";
  }
  if (c.templates) aggregation::read_templates_csv(*c.templates);
  if (c.sites) aggregation::read_onshore_sites_csv(*c.sites);
  o.code = problems == 0 ? kOk : kValidation;
  return o;
}

Outcome cmd_cluster(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Outcome o;
  const auto fields = aggregation::read_fields_csv(require(c.fields, "--fields"));
  aggregation::ClusterOptions opts;
  opts.k = c.k;
  opts.min_size = static_cast<std::size_t>(std::max(1, c.min_size));
  opts.seed = c.seed;
  const auto result = aggregation::cluster_fields(fields, opts);

  make_out_dir(c.out);
  std::string assign = "field,cluster,hub_lat,hub_lon,distance_km\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& cl = result.clusters[static_cast<std::size_t>(result.assignment[i])];
    assign += fields[i].id + ",C" + std::to_string(result.assignment[i] + 1) + "," + io::format_number(cl.lat) + "," +
              io::format_number(cl.lon) + "," + io::format_number(kernels::haversine_km({fields[i].lat, fields[i].lon}, {cl.lat, cl.lon})) + "\n";
  }
  write(c.out / "clusters.csv", assign, o);

  std::string hubs = "cluster,lat,lon,members,mean_spoke_km\n";
  std::vector<aggregation::FieldRecord> super;
  for (std::size_t k = 0; k < result.clusters.size(); ++k) {
    const auto& cl = result.clusters[k];
    hubs += "C" + std::to_string(k + 1) + "," + io::format_number(cl.lat) + "," + io::format_number(cl.lon) + "," +
            std::to_string(cl.members.size()) + "," + io::format_number(cl.mean_spoke_km) + "\n";
    std::vector<aggregation::FieldRecord> members;
    for (std::size_t i : cl.members) members.push_back(fields[i]);
    super.push_back(aggregation::aggregate_cluster(members, cl.lat, cl.lon, "F" + std::to_string(k + 1)).field);
  }
  write(c.out / "hubs.csv", hubs, o);
  write(c.out / "aggregated_fields.csv", aggregation::format_fields_csv(super), o);

  const auto templates = c.templates ? aggregation::read_templates_csv(*c.templates) : aggregation::ProfileTemplates{};
  const auto sites = c.sites ? aggregation::read_onshore_sites_csv(*c.sites) : aggregation::default_onshore_sites();
  const auto profiles = aggregation::generate_profiles(fields, templates, c.seed);
  aggregation::HubAndSpokeOptions hs;
  hs.slices = c.slices;
  hs.hours = c.hours;
  if (c.co2_tax) hs.co2_tax = *c.co2_tax;
  auto sys = aggregation::build_hub_and_spoke(fields, result, profiles, sites, hs);
  if (c.co2_cap) sys.policy.co2_cap = *c.co2_cap;
  model::save_system(sys, c.out, "hub_spoke");
  o.outputs.push_back(c.out / "hub_spoke.json");
  o.outputs.push_back(c.out / "hub_spoke_profiles.csv");

  out << fields.size() << " fields -> " << result.clusters.size() << " clusters; system with " << sys.locations.size()
      << " regions written to " << (c.out / "hub_spoke.json").string() << "\n";
  (void)err;
  return o;
}

Outcome report_solve(const model::EnergySystem& sys, const model::PlanningModel& m, const milp::MILPSolution& sol, const RunConfig& c,
                     std::ostream& out, std::ostream& err, Outcome o) {
  const auto rep = analysis::analyze(sys, m, sol);
  write(c.out / "report.json", analysis::solve_report_json(rep, sys.name), o);
  if (rep.has_solution) {
    write(c.out / "capacities.csv", analysis::format_solve_capacities_csv(rep), o);
    std::ostringstream s;
    milp::write_solution(m.instance, rep.values, s);
    write(c.out / "solution.txt", s.str(), o);
    out << "status " << milp::to_string(rep.status) << ", objective " << io::format_number(rep.objective) << ", emissions "
        << io::format_number(rep.emissions_t) << " t/yr, max residual " << rep.max_residual << "\n";
    if (!rep.accounting_error.empty()) err << "warning: " << rep.accounting_error << "\n";
    if (rep.max_residual > 1e-6) {
      err << "error: solution violates the model (max residual " << rep.max_residual << ")\n";
      o.code = kValidation;
    }
  } else {
    err << "error: no solution (" << milp::to_string(rep.status) << ")\n";
    o.code = kInfeasible;
  }
  return o;
}

Outcome cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Outcome o;
  const auto sys = load(c);
  const auto m = model::build_model(sys);
  make_out_dir(c.out);
  if (c.solver == "internal") {
    const auto sol = milp::solve_milp(m.instance, solver_config(c, c.gap));
    return report_solve(sys, m, sol, c, out, err, o);
  }
  if (c.solver != "export") throw UsageError("--solver must be internal or export");
  write(c.out / "model.mps", milp::write_mps(m.instance), o);
  if (!c.solution) {
    out << "wrote " << (c.out / "model.mps").string() << " (" << m.instance.num_variables() << " columns, " << m.instance.num_constraints()
        << " rows)\n";
    return o;
  }
  milp::MILPSolution sol;
  sol.values = milp::values_from_named(m.instance, milp::read_solution_file(*c.solution));
  sol.has_incumbent = true;
  sol.status = milp::SolveStatus::Optimal;
  sol.objective = m.instance.evaluate_objective(sol.values);
  sol.best_bound = sol.objective;
  return report_solve(sys, m, sol, c, out, err, o);
}

Outcome cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Outcome o;
  const auto kind = analysis::parse_sweep_kind(c.kind);
  if (!kind) throw UsageError("--kind must be tax, budget or pfs");
  const auto sys = load(c);
  analysis::SweepOptions opts;
  opts.solver = solver_config(c, c.sweep_gap);
  opts.threads = c.threads;
  opts.anchor_every = c.anchor_every;
  analysis::SweepResult r;
  switch (*kind) {
    case analysis::SweepKind::Tax: r = analysis::sweep_co2_tax(sys, analysis::linear_grid(c.tax.lo, c.tax.hi, c.tax.step), opts); break;
    case analysis::SweepKind::Budget: r = analysis::sweep_co2_budget(sys, analysis::budget_fractions(c.budget_step_pct / 100.0), opts); break;
    case analysis::SweepKind::Pfs:
      r = analysis::sweep_pfs_capacity(sys, analysis::linear_grid(c.pfs.lo, c.pfs.hi, c.pfs.step), c.fixed_tax, opts);
      break;
  }
  const std::string stem = std::string(analysis::to_string(*kind)) + "_sweep";
  analysis::write_sweep_report(r, c.out, stem);
  for (const char* suffix : {".csv", "_capacities.csv", "_summary.json"}) o.outputs.push_back(c.out / (stem + suffix));
  std::size_t infeasible = 0;
  for (const auto& row : r.rows) infeasible += row.feasible ? 0 : 1;
  out << r.rows.size() << " points, " << infeasible << " without solution; results in " << (c.out / (stem + ".csv")).string() << "\n";
  if (infeasible) err << "warning: " << infeasible << " sweep point(s) have no solution\n";
  return o;
}

ordered_json config_json(const RunConfig& c) {
  auto path = [](const std::optional<fs::path>& p) { return p ? ordered_json(p->generic_string()) : ordered_json(nullptr); };
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["system"] = path(c.system);
  j["profiles"] = path(c.profiles);
  j["fields"] = path(c.fields);
  j["templates"] = path(c.templates);
  j["sites"] = path(c.sites);
  j["solution"] = path(c.solution);
  j["out"] = c.out.generic_string();
  j["seed"] = c.seed;
  j["solver"] = c.solver;
  j["kind"] = c.kind;
  j["tax_range"] = format_range(c.tax);
  j["budget_steps"] = c.budget_step_pct;
  j["pfs_range"] = format_range(c.pfs);
  j["fixed_tax"] = c.fixed_tax;
  j["co2_tax"] = opt(c.co2_tax);
  j["co2_cap"] = opt(c.co2_cap);
  j["k"] = c.k;
  j["min_size"] = c.min_size;
  j["slices"] = c.slices;
  j["hours"] = c.hours;
  j["gap"] = c.gap;
  j["sweep_gap"] = c.sweep_gap;
  j["node_limit"] = c.node_limit;
  j["threads"] = c.threads;
  j["anchor_every"] = c.anchor_every;
  return j;
}

/// Inputs, resolved configuration and outputs; no timestamps, so reruns give the same bytes.
void write_manifest(const std::string& command, const RunConfig& c, const Outcome& o) {
  ordered_json j;
  j["tool"] = "oehplan";
  j["version"] = kVersion;
  j["command"] = command;
  j["exit_code"] = o.code;
  j["config"] = config_json(c);
  ordered_json outs = ordered_json::array();
  for (const auto& p : o.outputs) {
    ordered_json e;
    e["path"] = p.filename().generic_string();
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    e["bytes"] = ec ? ordered_json(nullptr) : ordered_json(size);
    outs.push_back(std::move(e));
  }
  j["outputs"] = std::move(outs);
  make_out_dir(c.out);
  io::write_text_file(c.out / "manifest.json", j.dump(2) + "\n");
}

}  // namespace

Range parse_range(const std::string& text) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw std::invalid_argument("range '" + text + "' is not lo:hi:step");
  }
  if (!(r.step > 0.0) || !(r.lo <= r.hi)) throw std::invalid_argument("range '" + text + "' needs lo <= hi and step > 0");
  return r;
}

std::string format_range(const Range& r) {
  return io::format_number(r.lo) + ":" + io::format_number(r.hi) + ":" + io::format_number(r.step);
}

void apply_config_file(const fs::path& path, RunConfig& c) {
  const std::string text = io::read_text_file(path);
  const std::string source = path.string();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::ParseError(source, 1, e.what());
  }
  if (!j.is_object()) throw io::ParseError(source, 1, "config must be a JSON object");
  const fs::path base = path.parent_path();
  for (const auto& [key, v] : j.items()) {
    auto fail = [&](const char* what) { throw io::ParseError(source, 1, "'" + key + "' " + what); };
    auto as_path = [&]() {
      if (!v.is_string()) fail("must be a string");
      const fs::path p = v.get<std::string>();
      return p.is_absolute() ? p : base / p;
    };
    auto as_number = [&]() {
      if (!v.is_number()) fail("must be a number");
      return v.get<double>();
    };
    auto as_int = [&]() {
      if (!v.is_number_integer()) fail("must be an integer");
      return v.get<std::int64_t>();
    };
    auto as_string = [&]() {
      if (!v.is_string()) fail("must be a string");
      return v.get<std::string>();
    };
    auto as_range = [&]() {
      try {
        return parse_range(as_string());
      } catch (const std::invalid_argument& e) {
        throw io::ParseError(source, 1, e.what());
      }
    };
    if (key == "system") c.system = as_path();
    else if (key == "profiles") c.profiles = as_path();
    else if (key == "fields") c.fields = as_path();
    else if (key == "templates") c.templates = as_path();
    else if (key == "sites") c.sites = as_path();
    else if (key == "solution") c.solution = as_path();
    else if (key == "out") c.out = as_path();
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int());
    else if (key == "solver") c.solver = as_string();
    else if (key == "kind") c.kind = as_string();
    else if (key == "tax_range") c.tax = as_range();
    else if (key == "budget_steps") c.budget_step_pct = as_number();
    else if (key == "pfs_range") c.pfs = as_range();
    else if (key == "fixed_tax") c.fixed_tax = as_number();
    else if (key == "co2_tax") c.co2_tax = as_number();
    else if (key == "co2_cap") c.co2_cap = as_number();
    else if (key == "k") c.k = static_cast<int>(as_int());
    else if (key == "min_size") c.min_size = static_cast<int>(as_int());
    else if (key == "slices") c.slices = static_cast<int>(as_int());
    else if (key == "hours") c.hours = static_cast<int>(as_int());
    else if (key == "gap") c.gap = as_number();
    else if (key == "sweep_gap") c.sweep_gap = as_number();
    else if (key == "node_limit") c.node_limit = as_int();
    else if (key == "threads") c.threads = static_cast<int>(as_int());
    else if (key == "anchor_every") c.anchor_every = static_cast<int>(as_int());
    else fail("is not a known setting");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offshore energy hub planning: validate, cluster, solve and sweep", "oehplan"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  // Flags are collected as strings and applied on top of the config file afterwards.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const std::string&)>>> flags;
  std::map<std::string, std::string> raw;
  auto flag = [&](const std::string& name, const std::string& help, std::function<void(RunConfig&, const std::string&)> apply) {
    CLI::Option* opt = app.add_option(name, raw[name], help);
    const bool is_path = name == "--system" || name == "--profiles" || name == "--fields" || name == "--templates" ||
                         name == "--sites" || name == "--solution" || name == "--out";
    const bool is_range = name.ends_with("-range");
    opt->type_name(is_path ? "PATH" : is_range ? "LO:HI:STEP" : name == "--solver" || name == "--kind" ? "NAME" : "NUM");
    flags.emplace_back(opt, std::move(apply));
  };
  auto number = [](const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
  };
  auto integer = [](const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
    return v;
  };
  flag("--system", "system JSON", [](RunConfig& c, const std::string& v) { c.system = v; });
  flag("--profiles", "directory holding the profile CSVs", [](RunConfig& c, const std::string& v) { c.profiles = v; });
  flag("--fields", "field CSV", [](RunConfig& c, const std::string& v) { c.fields = v; });
  flag("--templates", "profile template CSV", [](RunConfig& c, const std::string& v) { c.templates = v; });
  flag("--sites", "onshore landing site CSV", [](RunConfig& c, const std::string& v) { c.sites = v; });
  flag("--solution", "external solution file to import (export mode)", [](RunConfig& c, const std::string& v) { c.solution = v; });
  flag("--out", "output directory", [](RunConfig& c, const std::string& v) { c.out = v; });
  flag("--seed", "random seed", [&](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(integer(v)); });
  flag("--solver", "internal|export", [](RunConfig& c, const std::string& v) { c.solver = v; });
  flag("--kind", "sweep kind: tax|budget|pfs", [](RunConfig& c, const std::string& v) { c.kind = v; });
  flag("--tax-range", "lo:hi:step (default 55:500:5)", [](RunConfig& c, const std::string& v) { c.tax = parse_range(v); });
  flag("--budget-steps", "budget step in percent (default 5)", [&](RunConfig& c, const std::string& v) { c.budget_step_pct = number(v); });
  flag("--pfs-range", "lo:hi:step in MW (default 0:1000:10)", [](RunConfig& c, const std::string& v) { c.pfs = parse_range(v); });
  flag("--fixed-tax", "tax held during PFS sweeps (default 300)", [&](RunConfig& c, const std::string& v) { c.fixed_tax = number(v); });
  flag("--co2-tax", "override the system's CO2 tax", [&](RunConfig& c, const std::string& v) { c.co2_tax = number(v); });
  flag("--co2-cap", "override the system's CO2 cap, t/yr", [&](RunConfig& c, const std::string& v) { c.co2_cap = number(v); });
  flag("--k", "number of clusters", [&](RunConfig& c, const std::string& v) { c.k = static_cast<int>(integer(v)); });
  flag("--min-size", "minimum cluster size", [&](RunConfig& c, const std::string& v) { c.min_size = static_cast<int>(integer(v)); });
  flag("--slices", "representative slices of the built system", [&](RunConfig& c, const std::string& v) { c.slices = static_cast<int>(integer(v)); });
  flag("--hours", "hours per slice", [&](RunConfig& c, const std::string& v) { c.hours = static_cast<int>(integer(v)); });
  flag("--gap", "relative optimality gap for solve", [&](RunConfig& c, const std::string& v) { c.gap = number(v); });
  flag("--sweep-gap", "relative optimality gap for sweep points", [&](RunConfig& c, const std::string& v) { c.sweep_gap = number(v); });
  flag("--node-limit", "branch-and-bound node limit", [&](RunConfig& c, const std::string& v) { c.node_limit = integer(v); });
  flag("--threads", "sweep worker threads (OEHPLAN_THREADS caps this)", [&](RunConfig& c, const std::string& v) { c.threads = static_cast<int>(integer(v)); });
  flag("--anchor-every", "sweep points between cold solves", [&](RunConfig& c, const std::string& v) { c.anchor_every = static_cast<int>(integer(v)); });

  auto* validate = app.add_subcommand("validate", "check a system and/or field data");
  auto* cluster = app.add_subcommand("cluster", "cluster fields and build a hub-and-spoke system");
  auto* solve = app.add_subcommand("solve", "build and solve, or export MPS and import a solution");
  auto* sweep = app.add_subcommand("sweep", "CO2 tax, CO2 budget or PFS capacity sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  RunConfig config;
  std::string command;
  for (auto* sub : {validate, cluster, solve, sweep}) {
    if (sub->parsed()) command = sub->get_name();
  }
  Outcome outcome;
  const auto started = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty()) apply_config_file(config_path, config);
    for (auto& [opt, apply] : flags) {
      if (opt->count() > 0) {
        try {
          apply(config, raw[opt->get_name()]);
        } catch (const std::invalid_argument& e) {
          throw UsageError(opt->get_name() + ": " + e.what());
        } catch (const std::out_of_range&) {
          throw UsageError(opt->get_name() + ": value out of range");
        }
      }
    }
    if (command == "validate") outcome = cmd_validate(config, out, err);
    else if (command == "cluster") outcome = cmd_cluster(config, out, err);
    else if (command == "solve") outcome = cmd_solve(config, out, err);
    else outcome = cmd_sweep(config, out, err);
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const milp::MpsParseError& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const milp::SolutionError& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const aggregation::ClusteringError& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const model::BuildError& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    outcome.code = kValidation;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  err << "oehplan " << command << ": exit " << outcome.code << " after " << std::fixed << std::setprecision(2) << seconds << " s\n";
  if (command != "validate") {
    try {
      write_manifest(command, config, outcome);
    } catch (const io::IoError& e) {
      err << "error: " << e.what() << "\n";
      return kIo;
    }
  }
  return outcome.code;
}

}  // namespace oeh::cli
