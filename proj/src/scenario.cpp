#include "gridshare/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gridshare {

ValidationError::ValidationError(std::vector<Finding> findings)
    : Error([&] {
        std::ostringstream msg;
        msg << "validation failed (" << findings.size() << " finding"
            << (findings.size() == 1 ? "" : "s") << ")";
        for (const auto& f : findings) msg << "\n  " << f.path << ": " << f.reason;
        return msg.str();
      }()),
      findings_(std::move(findings)) {}

double Scenario::total_load(std::size_t t) const {
  double sum = 0.0;
  for (const auto& load : loads) sum += load.demand[t];
  return sum;
}

double Scenario::original_peak() const {
  double peak = 0.0;
  for (std::size_t t = 0; t < periods(); ++t) peak = std::max(peak, total_load(t));
  return peak;
}

double Scenario::total_load_energy() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < periods(); ++t) sum += total_load(t);
  return sum * time_grid.period_hours;
}

double Scenario::solar_available(std::size_t t) const {
  double sum = 0.0;
  for (const auto& unit : solar_units) sum += unit.generation[t];
  return sum;
}

double Scenario::total_solar_energy() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < periods(); ++t) sum += solar_available(t);
  return sum * time_grid.period_hours;
}

namespace {

class Collector {
public:
  void add(std::string path, std::string reason) {
    findings.push_back({std::move(path), std::move(reason)});
  }
  void require(bool ok, const std::string& path, const std::string& reason) {
    if (!ok) add(path, reason);
  }
  std::vector<Finding> findings;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void check_series(Collector& out, const std::string& path, const std::vector<double>& series,
                  std::size_t expected) {
  if (series.size() != expected) {
    out.add(path, "series length mismatch: expected " + std::to_string(expected) + ", got " +
                      std::to_string(series.size()));
  }
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!std::isfinite(series[t])) out.add(indexed(path, t), "value is not finite");
  }
}

void check_bess(Collector& out, const BessSpec& b, const std::string& path) {
  out.require(b.charge_eff > 0.0 && b.charge_eff <= 1.0, path + ".charge_eff",
              "0 < charge_eff <= 1 violated");
  out.require(b.discharge_eff > 0.0 && b.discharge_eff <= 1.0, path + ".discharge_eff",
              "0 < discharge_eff <= 1 violated");
  out.require(b.soc_min >= 0.0, path + ".soc_min", "soc_min >= 0 violated");
  out.require(b.soc_max <= 1.0, path + ".soc_max", "soc_max <= 1 violated");
  out.require(b.soc_min < b.soc_max, path + ".soc_min", "soc_min < soc_max violated");
  out.require(b.soc_initial >= b.soc_min && b.soc_initial <= b.soc_max, path + ".soc_initial",
              "soc_min <= soc_initial <= soc_max violated");
  out.require(b.soc_terminal_min >= b.soc_min && b.soc_terminal_min <= b.soc_max,
              path + ".soc_terminal_min", "soc_min <= soc_terminal_min <= soc_max violated");
  out.require(b.capacity_mwh > 0.0, path + ".capacity_mwh", "capacity_mwh > 0 violated");
  out.require(b.power_limit_mw > 0.0, path + ".power_limit_mw", "power_limit_mw > 0 violated");
  out.require(b.min_dwell_periods >= 1, path + ".min_dwell_periods",
              "min_dwell_periods >= 1 violated");
}

} // namespace

std::vector<Finding> validate_scenario(const Scenario& s) {
  Collector out;
  const std::size_t T = s.time_grid.period_count;
  out.require(T >= 1, "time_grid.period_count", "period_count >= 1 violated");
  out.require(s.time_grid.period_hours > 0.0, "time_grid.period_hours",
              "period_hours > 0 violated");
  out.require(!s.loads.empty(), "loads", "no participants");
  out.require(s.balance_tolerance >= 0.0 && s.balance_tolerance < 1.0, "balance_tolerance",
              "0 <= balance_tolerance < 1 violated");
  out.require(s.ramp_limit_fraction >= 0.0 && s.ramp_limit_fraction <= 1.0,
              "ramp_limit_fraction", "0 <= ramp_limit_fraction <= 1 violated");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.loads.size(); ++i) {
    const auto path = indexed("loads", i);
    const auto& load = s.loads[i];
    if (!ids.insert(load.participant_id).second)
      out.add(path + ".participant_id", "duplicate participant id '" + load.participant_id + "'");
    check_series(out, path + ".demand", load.demand, T);
    for (std::size_t t = 0; t < load.demand.size(); ++t)
      if (load.demand[t] < 0.0) out.add(indexed(path + ".demand", t), "demand >= 0 violated");
  }

  for (std::size_t j = 0; j < s.solar_units.size(); ++j) {
    const auto path = indexed("solar_units", j);
    const auto& unit = s.solar_units[j];
    out.require(unit.rated_capacity >= 0.0, path + ".rated_capacity",
                "rated_capacity >= 0 violated");
    check_series(out, path + ".generation", unit.generation, T);
    for (std::size_t t = 0; t < unit.generation.size(); ++t) {
      const double g = unit.generation[t];
      if (g < 0.0 || g > unit.rated_capacity)
        out.add(indexed(path + ".generation", t), "0 <= generation <= rated_capacity violated");
    }
  }

  for (std::size_t k = 0; k < s.bess_units.size(); ++k)
    check_bess(out, s.bess_units[k], indexed("bess_units", k));

  const auto& tariff = s.tariff;
  check_series(out, "tariff.energy_price", tariff.energy_price, T);
  for (std::size_t t = 0; t < tariff.energy_price.size(); ++t)
    if (!(tariff.energy_price[t] > 0.0))
      out.add(indexed("tariff.energy_price", t), "energy_price > 0 violated");
  out.require(tariff.peak_charge_rate >= 0.0, "tariff.peak_charge_rate",
              "peak_charge_rate >= 0 violated");
  out.require(tariff.battery_wear_cost >= 0.0, "tariff.battery_wear_cost",
              "battery_wear_cost >= 0 violated");
  out.require(tariff.grid_fixed_cost >= 0.0, "tariff.grid_fixed_cost",
              "grid_fixed_cost >= 0 violated");
  return std::move(out.findings);
}

void require_valid(const Scenario& scenario) {
  auto findings = validate_scenario(scenario);
  if (!findings.empty()) throw ValidationError(std::move(findings));
}

} // namespace gridshare
