#include "oeh/milp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace oeh::milp {

namespace {

SparseMatrix build_csc(const std::vector<LinearConstraint>& rows, int num_cols) {
  SparseMatrix m;
  m.rows = static_cast<int>(rows.size());
  m.cols = num_cols;
  m.start.assign(static_cast<std::size_t>(num_cols) + 1, 0);
  for (const auto& row : rows) {
    for (const auto& t : row.terms) ++m.start[static_cast<std::size_t>(t.var) + 1];
  }
  for (int j = 0; j < num_cols; ++j) m.start[j + 1] += m.start[j];
  m.index.resize(static_cast<std::size_t>(m.start.back()));
  m.value.resize(m.index.size());
  std::vector<int> fill(m.start.begin(), m.start.end() - 1);
  for (int i = 0; i < m.rows; ++i) {
    for (const auto& t : rows[static_cast<std::size_t>(i)].terms) {
      const int pos = fill[static_cast<std::size_t>(t.var)]++;
      m.index[static_cast<std::size_t>(pos)] = i;
      m.value[static_cast<std::size_t>(pos)] = t.coef;
    }
  }
  return m;
}

SparseMatrix build_csr(const std::vector<LinearConstraint>& rows, int num_cols) {
  SparseMatrix m;
  m.rows = static_cast<int>(rows.size());
  m.cols = num_cols;
  m.start.reserve(rows.size() + 1);
  m.start.push_back(0);
  for (const auto& row : rows) {
    for (const auto& t : row.terms) {
      m.index.push_back(t.var);
      m.value.push_back(t.coef);
    }
    m.start.push_back(static_cast<int>(m.index.size()));
  }
  return m;
}

}  // namespace

std::vector<Term> canonicalize(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

MILPInstance::MILPInstance(std::vector<Variable> variables, std::vector<LinearConstraint> constraints,
                           std::vector<Term> objective, double objective_offset, std::string name)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      constraints_(std::move(constraints)),
      objective_(std::move(objective)),
      objective_offset_(objective_offset) {
  std::vector<std::string> offending;
  std::string first_problem;
  auto flag = [&](std::string what, std::string who) {
    if (first_problem.empty()) first_problem = std::move(what);
    offending.push_back(std::move(who));
  };

  const auto n = static_cast<VarId>(variables_.size());
  by_name_.reserve(variables_.size());
  for (VarId j = 0; j < n; ++j) {
    auto& v = variables_[static_cast<std::size_t>(j)];
    const std::string who = "variable " + std::to_string(j) + " (" + v.name + ")";
    if (v.id != j) flag("variable id does not match its position", who);
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInfinity || v.upper == -kInfinity) {
      flag("variable bound is NaN or points the wrong way", who);
    } else if (v.lower > v.upper) {
      flag("variable lower bound exceeds upper bound", who);
    }
    if (v.integral && (!std::isfinite(v.lower) || !std::isfinite(v.upper))) {
      flag("integral variable needs finite bounds", who);
    }
    if (!by_name_.emplace(v.name, j).second) flag("duplicate variable name", who);
  }

  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& row = constraints_[i];
    const std::string who = "constraint " + std::to_string(i) + " (" + row.name + ")";
    if (!std::isfinite(row.rhs)) flag("constraint rhs is not finite", who);
    std::unordered_set<VarId> seen;
    for (const auto& t : row.terms) {
      if (t.var < 0 || t.var >= n) {
        flag("constraint references unknown variable id " + std::to_string(t.var), who);
      } else if (!seen.insert(t.var).second) {
        flag("duplicate variable id " + std::to_string(t.var) + " in constraint", who);
      }
      if (!std::isfinite(t.coef)) flag("constraint coefficient is not finite", who);
    }
  }

  cost_.assign(variables_.size(), 0.0);
  std::unordered_set<VarId> seen_obj;
  for (const auto& t : objective_) {
    if (t.var < 0 || t.var >= n) {
      flag("objective references unknown variable id " + std::to_string(t.var), "objective");
      continue;
    }
    if (!seen_obj.insert(t.var).second) flag("duplicate objective term", "variable " + std::to_string(t.var));
    if (!std::isfinite(t.coef)) flag("objective coefficient is not finite", "variable " + std::to_string(t.var));
    cost_[static_cast<std::size_t>(t.var)] += t.coef;
  }
  if (!std::isfinite(objective_offset_)) flag("objective offset is not finite", "objective");

  if (!offending.empty()) {
    throw InstanceError("malformed MILP instance: " + first_problem, std::move(offending));
  }

  csc_ = build_csc(constraints_, static_cast<int>(n));
  csr_ = build_csr(constraints_, static_cast<int>(n));
}

std::size_t MILPInstance::num_integral() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.integral; }));
}

std::optional<VarId> MILPInstance::find_variable(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

double MILPInstance::evaluate_objective(std::span<const double> values) const {
  double obj = objective_offset_;
  for (const auto& t : objective_) obj += t.coef * values[static_cast<std::size_t>(t.var)];
  return obj;
}

VarId InstanceBuilder::add_variable(std::string name, double lower, double upper, bool integral) {
  const auto id = static_cast<VarId>(variables_.size());
  variables_.push_back(Variable{id, std::move(name), lower, upper, integral});
  objective_.push_back(0.0);
  return id;
}

std::size_t InstanceBuilder::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  constraints_.push_back(LinearConstraint{std::move(name), canonicalize(std::move(terms)), sense, rhs});
  return constraints_.size() - 1;
}

void InstanceBuilder::add_objective(VarId var, double coef) {
  objective_.at(static_cast<std::size_t>(var)) += coef;
}

double InstanceBuilder::objective_coefficient(VarId var) const {
  return objective_.at(static_cast<std::size_t>(var));
}

MILPInstance InstanceBuilder::build(std::string name) const {
  std::vector<Term> obj;
  for (std::size_t j = 0; j < objective_.size(); ++j) {
    if (objective_[j] != 0.0) obj.push_back(Term{static_cast<VarId>(j), objective_[j]});
  }
  return MILPInstance(variables_, constraints_, std::move(obj), offset_, std::move(name));
}

}  // namespace oeh::milp
