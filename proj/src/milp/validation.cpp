#include "oeh/milp/validation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "oeh/kernels/kernels.hpp"

namespace oeh::milp {

double ValidationReport::max_residual() const { return std::max(max_constraint_violation, max_bound_violation); }

std::vector<std::size_t> ValidationReport::violated_rows(double threshold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < row_violations.size(); ++i) {
    if (row_violations[i] > threshold) out.push_back(i);
  }
  return out;
}

ValidationReport validate_solution(const MILPInstance& instance, std::span<const double> values) {
  const auto vars = instance.variables();
  if (values.size() < vars.size()) {
    throw SolutionError("solution has no value for variable '" + vars[values.size()].name + "'");
  }
  values = values.first(vars.size());
  ValidationReport rep;

  double worst_bound = -1.0;
  for (const auto& v : vars) {
    const double x = values[static_cast<std::size_t>(v.id)];
    if (!std::isfinite(x)) throw SolutionError("solution value for variable '" + v.name + "' is not finite");
    const double bv = std::max({0.0, v.lower - x, x - v.upper});
    rep.max_bound_violation = std::max(rep.max_bound_violation, bv);
    if (bv > worst_bound) {
      worst_bound = bv;
      rep.worst_variable = v.id;
    }
    if (v.integral) rep.max_integrality_deviation = std::max(rep.max_integrality_deviation, std::abs(x - std::round(x)));
  }

  const auto& csr = instance.csr();
  std::vector<double> activity(static_cast<std::size_t>(csr.rows), 0.0);
  kernels::row_activity({csr.start, csr.index, csr.value}, values, activity);
  const auto rows = instance.constraints();
  rep.row_violations.assign(rows.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double a = activity[i];
    const double b = rows[i].rhs;
    double viol = 0.0;
    switch (rows[i].sense) {
      case Sense::LessEqual: viol = std::max(0.0, a - b); break;
      case Sense::GreaterEqual: viol = std::max(0.0, b - a); break;
      case Sense::Equal: viol = std::abs(a - b); break;
    }
    rep.row_violations[i] = viol;
    sum += viol;
    if (rep.worst_row < 0 || viol > rep.max_constraint_violation) {
      rep.max_constraint_violation = viol;
      rep.worst_row = static_cast<std::ptrdiff_t>(i);
    }
  }
  rep.mean_constraint_violation = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  rep.objective = instance.evaluate_objective(values);
  return rep;
}

std::vector<double> values_from_named(const MILPInstance& instance, const NamedValues& named) {
  const std::size_t n = instance.num_variables();
  std::vector<double> values(n, 0.0);
  std::vector<char> set(n, 0);
  for (const auto& [name, value] : named) {
    std::optional<VarId> id = instance.find_variable(name);
    if (!id && name.size() == 8 && name[0] == 'C') {
      std::size_t k = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
      if (ec == std::errc() && ptr == name.data() + name.size() && k < n) id = static_cast<VarId>(k);
    }
    if (!id) throw SolutionError("solution names unknown variable '" + name + "'");
    values[static_cast<std::size_t>(*id)] = value;
    set[static_cast<std::size_t>(*id)] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!set[j]) throw SolutionError("solution has no value for variable '" + instance.variable(static_cast<VarId>(j)).name + "'");
  }
  return values;
}

NamedValues read_solution(std::istream& in) {
  NamedValues out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    const auto sp = body.find_last_of(" \t");
    if (sp == std::string::npos) {
      throw SolutionError("solution line " + std::to_string(line_no) + ": expected '<name> <value>'");
    }
    std::string name = body.substr(0, body.find_last_not_of(" \t", sp) + 1);
    const std::string num = body.substr(sp + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw SolutionError("solution line " + std::to_string(line_no) + ": invalid value '" + num + "'");
    }
    out.emplace_back(std::move(name), v);
  }
  return out;
}

NamedValues read_solution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolutionError("cannot open solution file " + path.string());
  return read_solution(in);
}

void write_solution(const MILPInstance& instance, std::span<const double> values, std::ostream& out) {
  char buf[64];
  for (const auto& v : instance.variables()) {
    auto res = std::to_chars(buf, buf + sizeof buf, values[static_cast<std::size_t>(v.id)]);
    out << v.name << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

}  // namespace oeh::milp
