#pragma once

#include "gridshare/allocation.hpp"
#include "gridshare/dispatch.hpp"
#include "gridshare/scenario.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gridshare {

// Metrics that are undefined for the given inputs (zero denominators) are
// returned as std::nullopt rather than as sentinel numbers.

/// Benefit share (solar + peak savings) minus cost share (wear + grid).
/// Undefined when either total is not positive.
std::optional<std::vector<double>> net_positions(const AllocationReport& report);

struct CooperativeGain {
  double total = 0.0;    // Σ standalone − cooperative total
  double average = 0.0;  // total / N
};

/// Throws Error when `standalone` is empty.
CooperativeGain cooperative_gain(std::span<const double> standalone, double coop_total);

/// Each participant's share of total load energy. Undefined for zero load.
std::optional<std::vector<double>> load_proportions(const Scenario& scenario);

/// |NP_i − LP_i|. Throws Error on a length mismatch.
std::vector<double> deviations(std::span<const double> net_position,
                               std::span<const double> load_proportion);

/// (original − optimized) / original; undefined when the original is 0.
std::optional<double> peak_reduction_efficiency(double original_peak_mw, double optimized_peak_mw);

struct SynergyMetrics {
  /// Allocated solar over available solar; never above 1.
  std::optional<double> solar_utilization_rate;
  /// Adds battery discharge that was charged from solar (grid-first
  /// attribution of charging energy); can exceed 1.
  std::optional<double> effective_solar_utilization;
  /// Equivalent full discharge cycles per battery.
  std::vector<double> bess_cycling;
  std::optional<double> peak_reduction_efficiency;
};

/// Throws Error if the allocated solar exceeds the available solar.
SynergyMetrics synergy_metrics(const DispatchSchedule& schedule, const Scenario& scenario);

struct FairnessReport {
  std::optional<std::vector<double>> net_position;
  std::optional<std::vector<double>> load_proportion;
  std::optional<std::vector<double>> proportionality_deviation;
  double cooperative_gain = 0.0;
  double average_gain = 0.0;
  SynergyMetrics synergy;
};

FairnessReport analyze_fairness(const DispatchSchedule& schedule, const Scenario& scenario,
                                const AllocationReport& allocation,
                                std::span<const double> standalone, double coop_total);

} // namespace gridshare
