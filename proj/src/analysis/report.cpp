#include "oeh/analysis/report.hpp"

#include <json.hpp>
#include <sstream>

#include "oeh/io/csv.hpp"

namespace oeh::analysis {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kLead{"index", "parameter", "status", "feasible", "cost", "emissions_mt", "cap_t", "binding",
                                     "pfs_installed_mw", "pfs_utilization", "nodes", "lp_iterations", "gap", "max_residual"};

std::string num(double v) { return io::format_number(v); }

std::optional<milp::SolveStatus> parse_status(std::string_view s) {
  for (auto st : {milp::SolveStatus::Optimal, milp::SolveStatus::Infeasible, milp::SolveStatus::Unbounded, milp::SolveStatus::NodeLimit}) {
    if (milp::to_string(st) == s) return st;
  }
  return std::nullopt;
}

ordered_json ledger_json(const LossLedger& l) {
  ordered_json j;
  for (const auto& [name, field] : LossLedger::categories()) j[name] = l.*field;
  j["total"] = l.total;
  return j;
}

io::Table table_of(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return io::read_csv(in, source);
}

}  // namespace

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = kLead;
    for (const auto& [name, field] : LossLedger::categories()) c.push_back(std::string("loss_") + name);
    c.push_back("loss_total");
    return c;
  }();
  return cols;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  for (const auto& c : sweep_columns()) out += (out.empty() ? "" : ",") + c;
  out += '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.index), num(r.parameter), std::string(milp::to_string(r.status)),
                                   r.feasible ? "1" : "0"};
    auto opt = [&](double v) { cells.push_back(r.feasible ? num(v) : std::string()); };
    opt(r.cost);
    opt(r.emissions_mt);
    cells.push_back(num(r.cap_t));
    cells.push_back(r.binding ? "1" : "0");
    opt(r.pfs_installed_mw);
    opt(r.pfs_utilization);
    cells.push_back(std::to_string(r.nodes));
    cells.push_back(std::to_string(r.lp_iterations));
    opt(r.gap);
    opt(r.max_residual);
    for (const auto& [name, field] : LossLedger::categories()) opt(r.losses.*field);
    opt(r.losses.total);
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text, const std::string& source) {
  const io::Table t = table_of(text, source);
  if (t.header != sweep_columns()) throw io::ParseError(source, 1, "unexpected sweep header");
  std::vector<SweepRow> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& cells = t.rows[r];
    std::size_t c = 0;
    auto number = [&]() { return cells[c].empty() ? (++c, 0.0) : t.number(r, c++); };
    auto integer = [&]() { return static_cast<std::int64_t>(number()); };
    SweepRow row;
    row.index = static_cast<std::size_t>(integer());
    row.parameter = number();
    const auto st = parse_status(cells[c++]);
    if (!st) throw io::ParseError(source, t.line_numbers[r], "unknown status '" + cells[c - 1] + "'");
    row.status = *st;
    row.feasible = number() != 0.0;
    row.cost = number();
    row.emissions_mt = number();
    row.cap_t = number();
    row.binding = number() != 0.0;
    row.pfs_installed_mw = number();
    row.pfs_utilization = number();
    row.nodes = integer();
    row.lp_iterations = integer();
    row.gap = number();
    row.max_residual = number();
    for (const auto& [name, field] : LossLedger::categories()) row.losses.*field = number();
    row.losses.total = number();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_capacities_csv(const std::vector<SweepRow>& rows) {
  std::string out = "parameter,cluster,technology,location,value\n";
  for (const auto& r : rows) {
    for (const auto& c : r.capacities) out += num(r.parameter) + "," + c.cluster + "," + c.technology + "," + c.location + "," + num(c.value) + "\n";
  }
  return out;
}

void parse_capacities_csv(const std::string& text, std::vector<SweepRow>& rows, const std::string& source) {
  const io::Table t = table_of(text, source);
  const std::vector<std::string> expected{"parameter", "cluster", "technology", "location", "value"};
  if (t.header != expected) throw io::ParseError(source, 1, "unexpected capacities header");
  std::size_t k = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double p = t.number(r, 0);
    while (k < rows.size() && rows[k].parameter != p) ++k;
    if (k == rows.size()) throw io::ParseError(source, t.line_numbers[r], "parameter " + t.rows[r][0] + " matches no sweep row");
    rows[k].capacities.push_back({t.rows[r][1], t.rows[r][2], t.rows[r][3], t.number(r, 4)});
  }
}

std::string sweep_summary_json(const SweepResult& result) {
  ordered_json j;
  j["kind"] = std::string(to_string(result.kind));
  j["points"] = result.rows.size();
  if (result.kind == SweepKind::Budget) j["base_emissions_t"] = result.base_emissions_t;
  if (result.kind == SweepKind::Pfs) {
    j["fixed_tax"] = result.fixed_tax;
    const auto sat = saturation_point(result.rows);
    j["saturation"] = sat ? ordered_json(*sat) : ordered_json(nullptr);
  }
  std::int64_t nodes = 0, iterations = 0;
  std::size_t infeasible = 0;
  ordered_json pts = ordered_json::array();
  for (const auto& r : result.rows) {
    nodes += r.nodes;
    iterations += r.lp_iterations;
    if (!r.feasible) ++infeasible;
    ordered_json p;
    p["index"] = r.index;
    p["parameter"] = r.parameter;
    p["status"] = std::string(milp::to_string(r.status));
    p["nodes"] = r.nodes;
    p["lp_iterations"] = r.lp_iterations;
    p["warm_started"] = r.warm_started;
    p["gap"] = r.feasible ? ordered_json(r.gap) : ordered_json(nullptr);
    p["max_residual"] = r.feasible ? ordered_json(r.max_residual) : ordered_json(nullptr);
    pts.push_back(std::move(p));
  }
  j["infeasible_points"] = infeasible;
  j["total_nodes"] = nodes;
  j["total_lp_iterations"] = iterations;
  j["solver"] = std::move(pts);
  return j.dump(2) + "\n";
}

std::string solve_report_json(const SolveReport& r, const std::string& system_name) {
  ordered_json j;
  j["system"] = system_name;
  j["status"] = std::string(milp::to_string(r.status));
  j["has_solution"] = r.has_solution;
  j["nodes"] = r.nodes;
  j["lp_iterations"] = r.lp_iterations;
  if (r.has_solution) {
    j["objective"] = r.objective;
    j["best_bound"] = r.best_bound;
    j["gap"] = r.gap;
    j["max_residual"] = r.max_residual;
    j["emissions_t"] = r.emissions_t;
    if (r.accounting_error.empty()) {
      j["losses_mwh"] = ledger_json(r.losses);
      ordered_json a;
      a["fuel"] = r.audit.fuel;
      a["renewable"] = r.audit.renewable;
      a["import"] = r.audit.import;
      a["load_shed"] = r.audit.load_shed;
      a["heat_load_shed"] = r.audit.heat_load_shed;
      a["useful"] = r.audit.useful;
      a["demand_margin"] = r.audit.demand_margin;
      j["audit_mwh"] = std::move(a);
    } else {
      j["accounting_error"] = r.accounting_error;
    }
  }
  return j.dump(2) + "\n";
}

std::string format_solve_capacities_csv(const SolveReport& report) {
  std::string out = "cluster,technology,location,value\n";
  for (const auto& c : report.capacities) out += c.cluster + "," + c.technology + "," + c.location + "," + num(c.value) + "\n";
  return out;
}

void write_sweep_report(const SweepResult& result, const std::filesystem::path& dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io::IoError("cannot create " + dir.string() + ": " + ec.message());
  io::write_text_file(dir / (stem + ".csv"), format_sweep_csv(result.rows));
  io::write_text_file(dir / (stem + "_capacities.csv"), format_capacities_csv(result.rows));
  io::write_text_file(dir / (stem + "_summary.json"), sweep_summary_json(result));
}

}  // namespace oeh::analysis
