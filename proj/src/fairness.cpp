#include "gridshare/fairness.hpp"

#include <algorithm>
#include <cmath>

namespace gridshare {

std::optional<std::vector<double>> net_positions(const AllocationReport& report) {
  const auto& solar = report[Component::SolarBenefit];
  const auto& peak = report[Component::PeakSavings];
  const auto& wear = report[Component::BessCost];
  const auto& grid = report[Component::GridCost];
  const std::size_t n = report.participants;
  double benefit_total = 0.0, cost_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    benefit_total += solar[i] + peak[i];
    cost_total += wear[i] + grid[i];
  }
  if (!(benefit_total > 0.0) || !(cost_total > 0.0)) return std::nullopt;
  std::vector<double> np(n);
  for (std::size_t i = 0; i < n; ++i)
    np[i] = (solar[i] + peak[i]) / benefit_total - (wear[i] + grid[i]) / cost_total;
  return np;
}

CooperativeGain cooperative_gain(std::span<const double> standalone, double coop_total) {
  if (standalone.empty()) throw Error("cooperative_gain: no standalone costs given");
  double sum = 0.0;
  for (double c : standalone) sum += c;
  CooperativeGain gain;
  gain.total = sum - coop_total;
  gain.average = gain.total / static_cast<double>(standalone.size());
  return gain;
}

std::optional<std::vector<double>> load_proportions(const Scenario& scenario) {
  const std::size_t n = scenario.participants();
  std::vector<double> energy(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double l : scenario.loads[i].demand) energy[i] += l;
    total += energy[i];
  }
  if (!(total > 0.0)) return std::nullopt;
  for (auto& e : energy) e /= total;
  return energy;
}

std::vector<double> deviations(std::span<const double> net_position,
                               std::span<const double> load_proportion) {
  if (net_position.size() != load_proportion.size())
    throw Error("deviations: net position and load proportion lengths differ");
  std::vector<double> out(net_position.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::abs(net_position[i] - load_proportion[i]);
  return out;
}

std::optional<double> peak_reduction_efficiency(double original_peak_mw,
                                                double optimized_peak_mw) {
  if (!(original_peak_mw > 0.0)) return std::nullopt;
  return (original_peak_mw - optimized_peak_mw) / original_peak_mw;
}

SynergyMetrics synergy_metrics(const DispatchSchedule& schedule, const Scenario& scenario) {
  const std::size_t n = scenario.participants();
  const std::size_t T = scenario.periods();
  const std::size_t B = scenario.bess_units.size();
  const double h = scenario.time_grid.period_hours;
  SynergyMetrics out;

  double available = 0.0, allocated = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    available += scenario.solar_available(t);
    for (std::size_t i = 0; i < n; ++i) allocated += schedule.solar_received(scenario, i, t);
  }

  // Solar-tagged energy inside each battery. Charging drawn by a
  // participant is matched against its grid import first, then against
  // its allocated solar; discharge drains the tag in proportion.
  std::vector<double> stored(B), solar_pool(B, 0.0);
  for (std::size_t k = 0; k < B; ++k)
    stored[k] = scenario.bess_units[k].soc_initial * scenario.bess_units[k].capacity_mwh;
  double shifted = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> solar_in(B, 0.0), charge_in(B, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double charge = 0.0;
      for (std::size_t k = 0; k < B; ++k) charge += schedule.charge(i, k, t);
      if (charge <= 0.0) continue;
      const double from_solar =
          std::min(schedule.solar_received(scenario, i, t),
                   std::max(0.0, charge - schedule.grid(i, t)));
      for (std::size_t k = 0; k < B; ++k) {
        const double c = schedule.charge(i, k, t);
        solar_in[k] += from_solar * (c / charge);
        charge_in[k] += c;
      }
    }
    for (std::size_t k = 0; k < B; ++k) {
      const auto& spec = scenario.bess_units[k];
      stored[k] += spec.charge_eff * charge_in[k] * h;
      solar_pool[k] += spec.charge_eff * solar_in[k] * h;
      const double delivered = schedule.battery_discharge(k, t) * h;
      const double drawn = delivered / spec.discharge_eff;
      if (drawn > 0.0 && stored[k] > 0.0) {
        const double fraction = std::clamp(solar_pool[k] / stored[k], 0.0, 1.0);
        solar_pool[k] -= fraction * drawn;
        shifted += fraction * delivered;
      }
      stored[k] = std::max(0.0, stored[k] - drawn);
      solar_pool[k] = std::clamp(solar_pool[k], 0.0, stored[k]);
    }
  }

  if (available > 0.0) {
    const double sur = allocated / available;
    if (sur > 1.0 + 1e-9)
      throw Error("synergy_metrics: allocated solar exceeds available solar");
    out.solar_utilization_rate = sur;
    out.effective_solar_utilization = (allocated * h + shifted) / (available * h);
  }

  out.bess_cycling.assign(B, 0.0);
  for (std::size_t k = 0; k < B; ++k) {
    double discharged = 0.0;
    for (std::size_t t = 0; t < T; ++t) discharged += schedule.battery_discharge(k, t) * h;
    out.bess_cycling[k] = discharged / scenario.bess_units[k].capacity_mwh;
  }

  out.peak_reduction_efficiency =
      peak_reduction_efficiency(scenario.original_peak(), schedule.system_peak_mw);
  return out;
}

FairnessReport analyze_fairness(const DispatchSchedule& schedule, const Scenario& scenario,
                                const AllocationReport& allocation,
                                std::span<const double> standalone, double coop_total) {
  FairnessReport report;
  report.net_position = net_positions(allocation);
  report.load_proportion = load_proportions(scenario);
  if (report.net_position && report.load_proportion)
    report.proportionality_deviation = deviations(*report.net_position, *report.load_proportion);
  const auto gain = cooperative_gain(standalone, coop_total);
  report.cooperative_gain = gain.total;
  report.average_gain = gain.average;
  report.synergy = synergy_metrics(schedule, scenario);
  return report;
}

} // namespace gridshare
