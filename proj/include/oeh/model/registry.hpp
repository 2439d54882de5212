#pragma once

// Variable registry shared by the investment block and the operational subsystems, plus the
// investment block itself (capacities, module counts and their costs).

#include <stdexcept>
#include <string>
#include <vector>

#include "oeh/milp/instance.hpp"
#include "oeh/model/system.hpp"

namespace oeh::model {

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Investment variables of one (technology, location) site.
struct CapacityHandle {
  std::size_t technology = 0;  ///< index into EnergySystem::technologies
  std::size_t site = 0;        ///< index into TechnologySpec::sites
  std::size_t location = 0;    ///< index into EnergySystem::locations
  milp::VarId installed = -1;  ///< x^PInst
  milp::VarId units = -1;      ///< γ^P
  milp::VarId accumulated = -1;  ///< x^PAcc
};

struct LineHandle {
  std::size_t branch = 0;
  milp::VarId installed = -1;
  milp::VarId units = -1;
  milp::VarId accumulated = -1;
};

/// Per-period usage bounded by a capacity: sum(usage[t]) <= factor * capacity.
struct CapacityLink {
  std::string name;
  milp::VarId capacity = -1;
  double factor = 1.0;
  std::vector<std::vector<milp::VarId>> usage;
};

class Registry {
 public:
  explicit Registry(const EnergySystem& system) : system_(system) {}

  [[nodiscard]] const EnergySystem& system() const { return system_; }
  [[nodiscard]] milp::InstanceBuilder& builder() { return builder_; }
  [[nodiscard]] const milp::InstanceBuilder& builder() const { return builder_; }

  void add_capacity(CapacityHandle handle) { capacities_.push_back(handle); }
  void add_line(LineHandle handle) { lines_.push_back(handle); }
  void link(CapacityLink link) { links_.push_back(std::move(link)); }

  [[nodiscard]] const std::vector<CapacityHandle>& capacities() const { return capacities_; }
  [[nodiscard]] const std::vector<LineHandle>& lines() const { return lines_; }
  [[nodiscard]] const std::vector<CapacityLink>& links() const { return links_; }

  /// Index of every capacity handle at `location` whose technology has `kind`.
  [[nodiscard]] std::vector<std::size_t> capacities_at(std::size_t location, TechnologyKind kind) const;
  [[nodiscard]] std::size_t location_index(std::string_view id) const;

 private:
  const EnergySystem& system_;
  milp::InstanceBuilder builder_;
  std::vector<CapacityHandle> capacities_;
  std::vector<LineHandle> lines_;
  std::vector<CapacityLink> links_;
};

/// Capacity upper bound of a site: X^PMax, further limited by the onshore bus limit for
/// power-from-shore.
double max_capacity(const EnergySystem& system, const TechnologySpec& tech, const TechnologySite& site);

/// Registers x^PInst, γ^P, x^PAcc for every site and x^LInst, γ^L, x^LAcc for every branch,
/// the accumulation and module-count rows, and the investment cost f(x) including the
/// kappa-scaled fixed O&M.
void build_investment_block(Registry& registry);

/// Emits one row per registered link and period.
void link_operational_capacities(Registry& registry);

}  // namespace oeh::model
