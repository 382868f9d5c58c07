#pragma once

#include "gridshare/errors.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gridshare {

// Units are MW, MWh, $/MWh and hours throughout. Series are dense and
// indexed by period 0..T-1.

struct TimeGrid {
  std::size_t period_count = 24;
  double period_hours = 1.0;

  bool operator==(const TimeGrid&) const = default;
};

struct LoadProfile {
  std::string participant_id;
  std::vector<double> demand;

  bool operator==(const LoadProfile&) const = default;
};

struct SolarUnit {
  std::string unit_id;
  std::vector<double> generation;
  double rated_capacity = 1.5;

  bool operator==(const SolarUnit&) const = default;
};

struct BessSpec {
  std::string unit_id;
  double capacity_mwh = 1.0;
  double power_limit_mw = 0.5;
  double charge_eff = 0.96;
  double discharge_eff = 0.96;
  double soc_min = 0.15;
  double soc_max = 0.95;
  double soc_terminal_min = 0.40;
  double soc_initial = 0.40;
  int min_dwell_periods = 2;

  bool operator==(const BessSpec&) const = default;
};

struct Tariff {
  std::vector<double> energy_price;
  double peak_charge_rate = 8700.0;  // $/MW, billed once per scenario day
  double battery_wear_cost = 10.0;   // $/MWh of throughput
  double grid_fixed_cost = 1000.0;   // $/day

  bool operator==(const Tariff&) const = default;
};

struct Scenario {
  TimeGrid time_grid;
  std::vector<LoadProfile> loads;
  std::vector<SolarUnit> solar_units;
  std::vector<BessSpec> bess_units;
  Tariff tariff;
  double balance_tolerance = 0.001;
  double ramp_limit_fraction = 0.2;

  std::size_t periods() const { return time_grid.period_count; }
  std::size_t participants() const { return loads.size(); }

  /// Σ_i L_i(t)
  double total_load(std::size_t t) const;
  /// max_t Σ_i L_i(t)
  double original_peak() const;
  /// Σ_t Σ_i L_i(t) · period_hours
  double total_load_energy() const;
  double total_solar_energy() const;
  double solar_available(std::size_t t) const;

  bool operator==(const Scenario&) const = default;
};

/// Empty iff every invariant of the scenario and its parts holds.
std::vector<Finding> validate_scenario(const Scenario& scenario);

/// Throws ValidationError carrying all findings when validation fails.
void require_valid(const Scenario& scenario);

} // namespace gridshare
