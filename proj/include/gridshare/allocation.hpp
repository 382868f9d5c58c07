#pragma once

#include "gridshare/dispatch.hpp"
#include "gridshare/scenario.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace gridshare {

enum class Component { SolarBenefit, BessCost, PeakSavings, GridCost };

inline constexpr std::array<Component, 4> kAllComponents = {
    Component::SolarBenefit, Component::BessCost, Component::PeakSavings, Component::GridCost};

std::string_view to_string(Component component);

/// Participant subset; bit i set means participant i is a member.
using Coalition = std::uint32_t;

inline constexpr std::size_t kDefaultEnumerationCap = 20;
/// Hard ceiling regardless of the configured cap (dense 2^N storage).
inline constexpr std::size_t kMaxEnumerationCap = 30;

// Characteristic functions. All of them read the grand-coalition schedule
// restricted to the members of the coalition; nothing is re-optimized.

/// Solar energy delivered to members, valued at the energy price.
double eval_solar_benefit(Coalition coalition, const DispatchSchedule& schedule,
                          const Scenario& scenario);
/// Wear cost of the battery throughput booked to members.
double eval_bess_cost(Coalition coalition, const DispatchSchedule& schedule,
                      const Scenario& scenario);
/// Peak charge avoided on the members' combined load.
double eval_peak_savings(Coalition coalition, const DispatchSchedule& schedule,
                         const Scenario& scenario);
/// Members' share of the fixed grid cost, by grid energy. With no grid
/// energy at all the cost is split equally per member.
double eval_grid_cost(Coalition coalition, const DispatchSchedule& schedule,
                      const Scenario& scenario);

double evaluate(Component component, Coalition coalition, const DispatchSchedule& schedule,
                const Scenario& scenario);

/// Exact Shapley values from a dense table indexed by bitmask
/// (values.size() == 2^n). A NaN entry counts as missing and raises an
/// Error naming the bitmask.
std::vector<double> shapley(std::span<const double> values, std::size_t n);
std::vector<double> shapley(const std::map<Coalition, double>& values, std::size_t n);

struct AllocationReport {
  std::size_t participants = 0;
  /// φ per component, indexed by participant.
  std::array<std::vector<double>, 4> phi;
  /// v(grand coalition) per component.
  std::array<double, 4> component_totals{};
  /// Characteristic-function calls made per component.
  std::array<std::size_t, 4> evaluations{};
  /// True when the grid cost fell back to the equal split.
  bool grid_cost_equal_split = false;

  const std::vector<double>& operator[](Component c) const {
    return phi[static_cast<std::size_t>(c)];
  }
  double total(Component c) const { return component_totals[static_cast<std::size_t>(c)]; }

  bool operator==(const AllocationReport&) const = default;
};

/// Throws EnumerationCapError when `participants` exceeds the cap.
void check_enumeration_cap(std::size_t participants, std::size_t cap = kDefaultEnumerationCap);

/// Evaluates all four components on every coalition and computes their
/// Shapley values. `parallelism` is the worker count (0 means one per
/// hardware thread); the result does not depend on it. Throws
/// EnumerationCapError when the participant count exceeds `cap`.
AllocationReport allocate(const DispatchSchedule& schedule, const Scenario& scenario,
                          std::size_t parallelism = 1,
                          std::size_t cap = kDefaultEnumerationCap);

enum class StandalonePolicy { GridOnly, ProportionalAssets };

std::string_view to_string(StandalonePolicy policy);

/// Cost each participant would pay on its own. GridOnly buys all load from
/// the grid; ProportionalAssets optimizes a one-participant scenario that
/// holds a load-proportional slice of every solar and battery unit.
std::vector<double> standalone_costs(const Scenario& scenario,
                                     StandalonePolicy policy = StandalonePolicy::GridOnly,
                                     const DispatchOptions& options = {});

} // namespace gridshare
