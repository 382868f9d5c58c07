#include "gridshare/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace gridshare {
namespace {

void require_shape(const DispatchSchedule& schedule, const Scenario& scenario) {
  if (schedule.participants() != scenario.participants() ||
      schedule.solar_units() != scenario.solar_units.size() ||
      schedule.batteries() != scenario.bess_units.size() ||
      schedule.periods() != scenario.periods())
    throw Error("allocation: schedule dimensions do not match the scenario");
}

void require_members(Coalition coalition, std::size_t n) {
  if (n < 32 && (coalition >> n) != 0)
    throw Error("allocation: coalition bitmask " + std::to_string(coalition) +
                " names participants beyond N = " + std::to_string(n));
}

/// Per-participant quantities every characteristic function is built from.
struct Terms {
  std::size_t n = 0;
  std::vector<double> solar;        // $ of solar received
  std::vector<double> bess;         // $ of wear on booked throughput
  std::vector<double> grid_energy;  // MWh imported
  double total_grid_energy = 0.0;
  double fixed_cost = 0.0;
  double peak_rate = 0.0;
  const DispatchSchedule* schedule = nullptr;
  const Scenario* scenario = nullptr;
};

Terms make_terms(const DispatchSchedule& schedule, const Scenario& scenario) {
  require_shape(schedule, scenario);
  Terms terms;
  const std::size_t n = scenario.participants();
  const std::size_t T = scenario.periods();
  const double h = scenario.time_grid.period_hours;
  const auto& tariff = scenario.tariff;
  terms.n = n;
  terms.solar.assign(n, 0.0);
  terms.bess.assign(n, 0.0);
  terms.grid_energy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double solar = 0.0, throughput = 0.0, energy = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      solar += tariff.energy_price[t] * schedule.solar_received(scenario, i, t) * h;
      for (std::size_t k = 0; k < schedule.batteries(); ++k)
        throughput += (schedule.charge(i, k, t) + schedule.discharge(i, k, t)) * h;
      energy += schedule.grid(i, t) * h;
    }
    terms.solar[i] = solar;
    terms.bess[i] = tariff.battery_wear_cost * throughput;
    terms.grid_energy[i] = energy;
    terms.total_grid_energy += energy;
  }
  terms.fixed_cost = tariff.grid_fixed_cost;
  terms.peak_rate = tariff.peak_charge_rate;
  terms.schedule = &schedule;
  terms.scenario = &scenario;
  return terms;
}

double sum_members(Coalition coalition, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (coalition >> i & 1u) sum += values[i];
  return sum;
}

double solar_value(Coalition c, const Terms& terms) { return sum_members(c, terms.solar); }

double bess_value(Coalition c, const Terms& terms) { return sum_members(c, terms.bess); }

double grid_value(Coalition c, const Terms& terms) {
  if (terms.total_grid_energy <= 0.0)
    return terms.fixed_cost * static_cast<double>(std::popcount(c)) / static_cast<double>(terms.n);
  return terms.fixed_cost * (sum_members(c, terms.grid_energy) / terms.total_grid_energy);
}

double peak_value(Coalition c, const Terms& terms) {
  if (c == 0) return 0.0;
  const auto& loads = terms.scenario->loads;
  const auto& schedule = *terms.schedule;
  double load_peak = 0.0, grid_peak = 0.0;
  for (std::size_t t = 0; t < terms.scenario->periods(); ++t) {
    double load = 0.0, grid = 0.0;
    for (std::size_t i = 0; i < terms.n; ++i) {
      if (!(c >> i & 1u)) continue;
      load += loads[i].demand[t];
      grid += schedule.grid(i, t);
    }
    load_peak = std::max(load_peak, load);
    grid_peak = std::max(grid_peak, grid);
  }
  return terms.peak_rate * (load_peak - grid_peak);
}

double value_of(Component component, Coalition c, const Terms& terms) {
  switch (component) {
  case Component::SolarBenefit: return solar_value(c, terms);
  case Component::BessCost: return bess_value(c, terms);
  case Component::PeakSavings: return peak_value(c, terms);
  case Component::GridCost: return grid_value(c, terms);
  }
  return 0.0;
}

/// Runs fn(begin, end) over `count` items split into contiguous blocks,
/// one block per worker.
template <class Fn>
void parallel_blocks(std::size_t count, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = count / workers;
  const std::size_t extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    pool.emplace_back(fn, begin, end, w);
    begin = end;
  }
  for (auto& thread : pool) thread.join();
}

std::vector<double> shapley_weights(std::size_t n) {
  // |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1, |S|))
  std::vector<double> weights(n);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weights[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  return weights;
}

double shapley_one(std::span<const double> values, std::size_t n, std::size_t i,
                   const std::vector<double>& weights) {
  const Coalition bit = Coalition{1} << i;
  const std::size_t size = std::size_t{1} << n;
  double phi = 0.0;
  for (std::size_t mask = 0; mask < size; ++mask) {
    const auto s = static_cast<Coalition>(mask);
    if (s & bit) continue;
    phi += weights[static_cast<std::size_t>(std::popcount(s))] * (values[s | bit] - values[s]);
  }
  return phi;
}

void check_table(std::span<const double> values, std::size_t n) {
  if (n > kMaxEnumerationCap)
    throw EnumerationCapError("shapley: n = " + std::to_string(n) + " exceeds the hard cap of " +
                              std::to_string(kMaxEnumerationCap));
  if (values.size() != (std::size_t{1} << n))
    throw Error("shapley: expected " + std::to_string(std::size_t{1} << n) +
                " coalition values for n = " + std::to_string(n) + ", got " +
                std::to_string(values.size()));
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    if (std::isnan(values[mask])) {
      std::string bits;
      for (std::size_t i = n; i-- > 0;) bits += (mask >> i & 1u) ? '1' : '0';
      throw Error("shapley: missing value for coalition bitmask " + std::to_string(mask) +
                  " (0b" + (bits.empty() ? "0" : bits) + ")");
    }
  }
}

void check_efficiency(Component component, const std::vector<double>& phi, double grand) {
  double sum = 0.0;
  for (double v : phi) sum += v;
  if (std::abs(sum - grand) > 1e-6 * std::abs(grand) + 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "allocation: " << to_string(component) << " shares sum to " << sum
        << " but the grand coalition is worth " << grand;
    throw Error(msg.str());
  }
}

} // namespace

std::string_view to_string(Component component) {
  switch (component) {
  case Component::SolarBenefit: return "solar_benefit";
  case Component::BessCost: return "bess_cost";
  case Component::PeakSavings: return "peak_savings";
  case Component::GridCost: return "grid_cost";
  }
  return "unknown";
}

std::string_view to_string(StandalonePolicy policy) {
  return policy == StandalonePolicy::GridOnly ? "grid-only" : "proportional";
}

double eval_solar_benefit(Coalition c, const DispatchSchedule& schedule, const Scenario& scenario) {
  require_members(c, scenario.participants());
  return solar_value(c, make_terms(schedule, scenario));
}

double eval_bess_cost(Coalition c, const DispatchSchedule& schedule, const Scenario& scenario) {
  require_members(c, scenario.participants());
  return bess_value(c, make_terms(schedule, scenario));
}

double eval_peak_savings(Coalition c, const DispatchSchedule& schedule, const Scenario& scenario) {
  require_members(c, scenario.participants());
  return peak_value(c, make_terms(schedule, scenario));
}

double eval_grid_cost(Coalition c, const DispatchSchedule& schedule, const Scenario& scenario) {
  require_members(c, scenario.participants());
  return grid_value(c, make_terms(schedule, scenario));
}

double evaluate(Component component, Coalition c, const DispatchSchedule& schedule,
                const Scenario& scenario) {
  require_members(c, scenario.participants());
  return value_of(component, c, make_terms(schedule, scenario));
}

std::vector<double> shapley(std::span<const double> values, std::size_t n) {
  check_table(values, n);
  const auto weights = shapley_weights(n);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = shapley_one(values, n, i, weights);
  return phi;
}

std::vector<double> shapley(const std::map<Coalition, double>& values, std::size_t n) {
  if (n > kMaxEnumerationCap)
    throw EnumerationCapError("shapley: n = " + std::to_string(n) + " exceeds the hard cap of " +
                              std::to_string(kMaxEnumerationCap));
  std::vector<double> dense(std::size_t{1} << n, std::numeric_limits<double>::quiet_NaN());
  for (const auto& [mask, v] : values) {
    if (mask >= dense.size())
      throw Error("shapley: coalition bitmask " + std::to_string(mask) +
                  " names participants beyond n = " + std::to_string(n));
    dense[mask] = v;
  }
  return shapley(std::span<const double>(dense), n);
}

void check_enumeration_cap(std::size_t participants, std::size_t cap) {
  const std::size_t limit = std::min(cap, kMaxEnumerationCap);
  if (participants > limit)
    throw EnumerationCapError("allocation: " + std::to_string(participants) +
                              " participants exceed the exact-enumeration cap of " +
                              std::to_string(limit) +
                              "; reduce the participant count (e.g. aggregate loads)");
}

AllocationReport allocate(const DispatchSchedule& schedule, const Scenario& scenario,
                          std::size_t parallelism, std::size_t cap) {
  const std::size_t n = scenario.participants();
  check_enumeration_cap(n, cap);
  if (n == 0) throw Error("allocation: scenario has no participants");
  if (parallelism == 0) parallelism = std::max(1u, std::thread::hardware_concurrency());

  const Terms terms = make_terms(schedule, scenario);
  const std::size_t size = std::size_t{1} << n;
  std::array<std::vector<double>, 4> tables;
  for (auto& table : tables) table.assign(size, 0.0);
  std::vector<std::array<std::size_t, 4>> counts(std::min(parallelism, size));

  parallel_blocks(size, parallelism, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    auto& count = counts[worker];
    for (std::size_t mask = begin; mask < end; ++mask) {
      for (std::size_t c = 0; c < kAllComponents.size(); ++c) {
        tables[c][mask] = value_of(kAllComponents[c], static_cast<Coalition>(mask), terms);
        ++count[c];
      }
    }
  });

  AllocationReport report;
  report.participants = n;
  report.grid_cost_equal_split = terms.total_grid_energy <= 0.0;
  for (const auto& count : counts)
    for (std::size_t c = 0; c < 4; ++c) report.evaluations[c] += count[c];

  const auto weights = shapley_weights(n);
  for (std::size_t c = 0; c < 4; ++c) {
    report.phi[c].assign(n, 0.0);
    report.component_totals[c] = tables[c][size - 1];
  }
  // One job per (component, participant); each is a fixed-order sum.
  const std::size_t jobs = 4 * n;
  parallel_blocks(jobs, parallelism, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t job = begin; job < end; ++job) {
      const std::size_t c = job / n, i = job % n;
      report.phi[c][i] = shapley_one(tables[c], n, i, weights);
    }
  });
  for (std::size_t c = 0; c < 4; ++c)
    check_efficiency(kAllComponents[c], report.phi[c], report.component_totals[c]);
  return report;
}

std::vector<double> standalone_costs(const Scenario& scenario, StandalonePolicy policy,
                                     const DispatchOptions& options) {
  require_valid(scenario);
  const std::size_t n = scenario.participants();
  const std::size_t T = scenario.periods();
  const double h = scenario.time_grid.period_hours;
  const auto& tariff = scenario.tariff;
  std::vector<double> costs(n, 0.0);

  if (policy == StandalonePolicy::GridOnly) {
    for (std::size_t i = 0; i < n; ++i) {
      double energy = 0.0, peak = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        const double load = scenario.loads[i].demand[t];
        energy += tariff.energy_price[t] * load * h;
        peak = std::max(peak, load);
      }
      costs[i] = energy + tariff.peak_charge_rate * peak;
    }
    return costs;
  }

  const double total = scenario.total_load_energy();
  for (std::size_t i = 0; i < n; ++i) {
    double own = 0.0;
    for (std::size_t t = 0; t < T; ++t) own += scenario.loads[i].demand[t] * h;
    const double share = total > 0.0 ? own / total : 0.0;

    Scenario single;
    single.time_grid = scenario.time_grid;
    single.loads = {scenario.loads[i]};
    single.tariff = tariff;
    single.balance_tolerance = scenario.balance_tolerance;
    single.ramp_limit_fraction = scenario.ramp_limit_fraction;
    if (share > 0.0) {
      for (const auto& unit : scenario.solar_units) {
        SolarUnit slice = unit;
        slice.rated_capacity = unit.rated_capacity * share;
        for (auto& g : slice.generation) g *= share;
        single.solar_units.push_back(std::move(slice));
      }
      for (const auto& unit : scenario.bess_units) {
        BessSpec slice = unit;
        slice.capacity_mwh = unit.capacity_mwh * share;
        slice.power_limit_mw = unit.power_limit_mw * share;
        single.bess_units.push_back(std::move(slice));
      }
    }
    costs[i] = optimize_dispatch(single, options).costs.total_cost;
  }
  return costs;
}

} // namespace gridshare
