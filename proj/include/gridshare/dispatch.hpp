#pragma once

#include "gridshare/lp/solver.hpp"
#include "gridshare/scenario.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gridshare {

enum class AntiSimultaneityMode { LinearBudget, BinaryModes };
enum class DwellTimeMode { Off, BinaryModes };

struct DispatchOptions {
  lp::SolveOptions solve_options;
  AntiSimultaneityMode anti_simultaneity = AntiSimultaneityMode::LinearBudget;
  DwellTimeMode dwell_time = DwellTimeMode::Off;
  bool include_wear_in_objective = false;

  /// Strict charge/discharge exclusivity plus minimum dwell on the mode.
  static DispatchOptions binary_modes() {
    DispatchOptions o;
    o.anti_simultaneity = AntiSimultaneityMode::BinaryModes;
    o.dwell_time = DwellTimeMode::BinaryModes;
    return o;
  }
};

/// Values of every dispatch decision variable, stored densely.
class DispatchSchedule {
public:
  DispatchSchedule() = default;
  DispatchSchedule(std::size_t participants, std::size_t solar_units, std::size_t batteries,
                   std::size_t periods);

  std::size_t participants() const { return n_; }
  std::size_t solar_units() const { return s_; }
  std::size_t batteries() const { return b_; }
  std::size_t periods() const { return t_; }

  double& grid(std::size_t i, std::size_t t) { return grid_[i * t_ + t]; }
  double grid(std::size_t i, std::size_t t) const { return grid_[i * t_ + t]; }
  double& alpha(std::size_t i, std::size_t j, std::size_t t) { return alpha_[(i * s_ + j) * t_ + t]; }
  double alpha(std::size_t i, std::size_t j, std::size_t t) const { return alpha_[(i * s_ + j) * t_ + t]; }
  double& charge(std::size_t i, std::size_t k, std::size_t t) { return charge_[(i * b_ + k) * t_ + t]; }
  double charge(std::size_t i, std::size_t k, std::size_t t) const { return charge_[(i * b_ + k) * t_ + t]; }
  double& discharge(std::size_t i, std::size_t k, std::size_t t) { return discharge_[(i * b_ + k) * t_ + t]; }
  double discharge(std::size_t i, std::size_t k, std::size_t t) const { return discharge_[(i * b_ + k) * t_ + t]; }
  double& soc(std::size_t k, std::size_t t) { return soc_[k * t_ + t]; }
  double soc(std::size_t k, std::size_t t) const { return soc_[k * t_ + t]; }

  double system_peak_mw = 0.0;

  /// Σ_i G_i(t)
  double total_grid(std::size_t t) const;
  double max_total_grid() const;
  /// Σ_j α_ij(t) S_j(t) for participant i.
  double solar_received(const Scenario& scenario, std::size_t i, std::size_t t) const;
  /// Σ_i C_ik(t) and Σ_i D_ik(t).
  double battery_charge(std::size_t k, std::size_t t) const;
  double battery_discharge(std::size_t k, std::size_t t) const;

  bool operator==(const DispatchSchedule&) const = default;

private:
  std::size_t n_ = 0, s_ = 0, b_ = 0, t_ = 0;
  std::vector<double> grid_, alpha_, charge_, discharge_, soc_;
};

struct CostBreakdown {
  double energy_cost = 0.0;
  double peak_charge = 0.0;
  double battery_wear_cost = 0.0;
  double total_cost = 0.0;
  bool wear_in_total = false;
};

/// Column positions of each decision variable in the built problem.
class VariableMap {
public:
  VariableMap() = default;
  VariableMap(std::size_t participants, std::size_t solar_units, std::size_t batteries,
              std::size_t periods, bool with_modes);

  std::size_t grid(std::size_t i, std::size_t t) const { return i * t_ + t; }
  std::size_t alpha(std::size_t i, std::size_t j, std::size_t t) const {
    return alpha_base_ + (i * s_ + j) * t_ + t;
  }
  std::size_t charge(std::size_t i, std::size_t k, std::size_t t) const {
    return charge_base_ + (i * b_ + k) * t_ + t;
  }
  std::size_t discharge(std::size_t i, std::size_t k, std::size_t t) const {
    return discharge_base_ + (i * b_ + k) * t_ + t;
  }
  std::size_t soc(std::size_t k, std::size_t t) const { return soc_base_ + k * t_ + t; }
  std::size_t peak() const { return peak_; }
  bool has_modes() const { return with_modes_; }
  std::size_t mode(std::size_t k, std::size_t t) const { return mode_base_ + k * t_ + t; }
  std::size_t variable_count() const { return count_; }

private:
  std::size_t n_ = 0, s_ = 0, b_ = 0, t_ = 0;
  std::size_t alpha_base_ = 0, charge_base_ = 0, discharge_base_ = 0, soc_base_ = 0;
  std::size_t peak_ = 0, mode_base_ = 0, count_ = 0;
  bool with_modes_ = false;
};

struct DispatchModel {
  lp::LinearProblem problem;
  VariableMap map;
};

/// Throws ValidationError for an invalid scenario and std::invalid_argument
/// for inconsistent options.
DispatchModel build_model(const Scenario& scenario, const DispatchOptions& options = {});

struct DispatchResult {
  DispatchSchedule schedule;
  CostBreakdown costs;
  lp::Status status = lp::Status::Optimal;
  double objective = 0.0;
  std::optional<double> achieved_gap;
  std::size_t iterations = 0;
  std::size_t nodes = 0;
  double solve_seconds = 0.0;
};

/// Builds, solves and extracts the schedule, then re-checks its physics.
/// Throws InfeasibleError naming the violated row, or TimeLimitError when
/// the solver stops without any feasible schedule.
DispatchResult optimize_dispatch(const Scenario& scenario, const DispatchOptions& options = {},
                                 const lp::Solver& solver = lp::default_solver());

DispatchSchedule extract_schedule(const Scenario& scenario, const VariableMap& map,
                                  const std::vector<double>& values);

CostBreakdown assemble_costs(const DispatchSchedule& schedule, const Tariff& tariff,
                             double period_hours = 1.0, bool include_wear = false);

/// No coordination: every participant imports its own load.
CostBreakdown baseline_costs(const Scenario& scenario);

/// Direct arithmetic re-check of the schedule against every operating
/// constraint. Empty when all hold within `tolerance` (MW or MWh).
std::vector<Finding> check_schedule(const DispatchSchedule& schedule, const Scenario& scenario,
                                    const DispatchOptions& options = {},
                                    double tolerance = 1e-6);

} // namespace gridshare
