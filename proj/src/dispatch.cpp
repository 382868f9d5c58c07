#include "gridshare/dispatch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gridshare {

using lp::Bounds;
using lp::Relation;
using lp::Term;

DispatchSchedule::DispatchSchedule(std::size_t participants, std::size_t solar_units,
                                   std::size_t batteries, std::size_t periods)
    : n_(participants), s_(solar_units), b_(batteries), t_(periods),
      grid_(participants * periods, 0.0), alpha_(participants * solar_units * periods, 0.0),
      charge_(participants * batteries * periods, 0.0),
      discharge_(participants * batteries * periods, 0.0), soc_(batteries * periods, 0.0) {}

double DispatchSchedule::total_grid(std::size_t t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += grid(i, t);
  return sum;
}

double DispatchSchedule::max_total_grid() const {
  double peak = 0.0;
  for (std::size_t t = 0; t < t_; ++t) peak = std::max(peak, total_grid(t));
  return peak;
}

double DispatchSchedule::solar_received(const Scenario& scenario, std::size_t i,
                                        std::size_t t) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < s_; ++j) sum += alpha(i, j, t) * scenario.solar_units[j].generation[t];
  return sum;
}

double DispatchSchedule::battery_charge(std::size_t k, std::size_t t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += charge(i, k, t);
  return sum;
}

double DispatchSchedule::battery_discharge(std::size_t k, std::size_t t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += discharge(i, k, t);
  return sum;
}

VariableMap::VariableMap(std::size_t participants, std::size_t solar_units, std::size_t batteries,
                         std::size_t periods, bool with_modes)
    : n_(participants), s_(solar_units), b_(batteries), t_(periods), with_modes_(with_modes) {
  alpha_base_ = n_ * t_;
  charge_base_ = alpha_base_ + n_ * s_ * t_;
  discharge_base_ = charge_base_ + n_ * b_ * t_;
  soc_base_ = discharge_base_ + n_ * b_ * t_;
  peak_ = soc_base_ + b_ * t_;
  mode_base_ = peak_ + 1;
  count_ = mode_base_ + (with_modes ? b_ * t_ : 0);
}

namespace {

std::string tag(const char* base, std::initializer_list<std::pair<char, std::size_t>> parts) {
  std::string out = base;
  for (const auto& [key, value] : parts) {
    out += '_';
    out += key;
    out += std::to_string(value);
  }
  return out;
}

void check_options(const DispatchOptions& options) {
  if (options.dwell_time == DwellTimeMode::BinaryModes &&
      options.anti_simultaneity != AntiSimultaneityMode::BinaryModes)
    throw std::invalid_argument(
        "dispatch options: dwell-time modes require binary anti-simultaneity modes");
}

} // namespace

DispatchModel build_model(const Scenario& scenario, const DispatchOptions& options) {
  require_valid(scenario);
  check_options(options);

  const std::size_t N = scenario.participants();
  const std::size_t S = scenario.solar_units.size();
  const std::size_t B = scenario.bess_units.size();
  const std::size_t T = scenario.periods();
  const double h = scenario.time_grid.period_hours;
  const double eps = scenario.balance_tolerance;
  const bool modes = options.anti_simultaneity == AntiSimultaneityMode::BinaryModes;
  const auto& tariff = scenario.tariff;
  const double wear = options.include_wear_in_objective ? tariff.battery_wear_cost * h : 0.0;

  DispatchModel model{lp::LinearProblem(lp::Sense::Minimize), VariableMap(N, S, B, T, modes)};
  auto& p = model.problem;
  const auto& map = model.map;

  // Columns, in VariableMap order.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t t = 0; t < T; ++t)
      p.add_variable(tag("G", {{'i', i}, {'t', t}}), h * tariff.energy_price[t]);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < S; ++j)
      for (std::size_t t = 0; t < T; ++t)
        p.add_variable(tag("alpha", {{'i', i}, {'j', j}, {'t', t}}), 0.0, Bounds{0.0, 1.0});
  for (const char* kind : {"C", "D"})
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < B; ++k)
        for (std::size_t t = 0; t < T; ++t)
          p.add_variable(tag(kind, {{'i', i}, {'k', k}, {'t', t}}), wear,
                         Bounds{0.0, scenario.bess_units[k].power_limit_mw});
  for (std::size_t k = 0; k < B; ++k) {
    const auto& bess = scenario.bess_units[k];
    for (std::size_t t = 0; t < T; ++t)
      p.add_variable(tag("SOC", {{'k', k}, {'t', t}}), 0.0,
                     Bounds{bess.soc_min * bess.capacity_mwh, bess.soc_max * bess.capacity_mwh});
  }
  p.add_variable("P_peak", tariff.peak_charge_rate);
  if (modes)
    for (std::size_t k = 0; k < B; ++k)
      for (std::size_t t = 0; t < T; ++t) p.add_binary(tag("z", {{'k', k}, {'t', t}}));

  // Power balance band per participant and period.
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Term> supply{{map.grid(i, t), 1.0}};
      for (std::size_t j = 0; j < S; ++j) {
        const double gen = scenario.solar_units[j].generation[t];
        if (gen != 0.0) supply.push_back({map.alpha(i, j, t), gen});
      }
      for (std::size_t k = 0; k < B; ++k) {
        supply.push_back({map.discharge(i, k, t), 1.0});
        supply.push_back({map.charge(i, k, t), -1.0});
      }
      const double load = scenario.loads[i].demand[t];
      p.add_constraint(supply, Relation::GreaterEqual, load * (1.0 - eps),
                       tag("balance_lo", {{'i', i}, {'t', t}}));
      p.add_constraint(std::move(supply), Relation::LessEqual, load * (1.0 + eps),
                       tag("balance_hi", {{'i', i}, {'t', t}}));
    }
  }

  // Each solar unit's output is shared at most once.
  for (std::size_t j = 0; j < S; ++j) {
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Term> share;
      for (std::size_t i = 0; i < N; ++i) share.push_back({map.alpha(i, j, t), 1.0});
      p.add_constraint(std::move(share), Relation::LessEqual, 1.0,
                       tag("solar_share", {{'j', j}, {'t', t}}));
    }
  }

  for (std::size_t k = 0; k < B; ++k) {
    const auto& bess = scenario.bess_units[k];
    for (std::size_t t = 0; t < T; ++t) {
      // SOC(t) is end-of-period energy; the period before t = 0 holds
      // soc_initial · E.
      std::vector<Term> row{{map.soc(k, t), 1.0}};
      if (t > 0) row.push_back({map.soc(k, t - 1), -1.0});
      for (std::size_t i = 0; i < N; ++i) {
        row.push_back({map.charge(i, k, t), -h * bess.charge_eff});
        row.push_back({map.discharge(i, k, t), h / bess.discharge_eff});
      }
      const double rhs = t == 0 ? bess.soc_initial * bess.capacity_mwh : 0.0;
      p.add_constraint(std::move(row), Relation::Equal, rhs, tag("soc_balance", {{'k', k}, {'t', t}}));
    }
  }

  for (std::size_t k = 0; k < B; ++k) {
    const double pmax = scenario.bess_units[k].power_limit_mw;
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Term> charge, discharge, both;
      for (std::size_t i = 0; i < N; ++i) {
        charge.push_back({map.charge(i, k, t), 1.0});
        discharge.push_back({map.discharge(i, k, t), 1.0});
      }
      both = charge;
      both.insert(both.end(), discharge.begin(), discharge.end());
      if (modes) {
        auto charge_mode = charge;
        charge_mode.push_back({map.mode(k, t), -pmax});
        p.add_constraint(std::move(charge_mode), Relation::LessEqual, 0.0,
                         tag("charge_mode", {{'k', k}, {'t', t}}));
        auto discharge_mode = discharge;
        discharge_mode.push_back({map.mode(k, t), pmax});
        p.add_constraint(std::move(discharge_mode), Relation::LessEqual, pmax,
                         tag("discharge_mode", {{'k', k}, {'t', t}}));
      }
      p.add_constraint(std::move(charge), Relation::LessEqual, pmax,
                       tag("charge_limit", {{'k', k}, {'t', t}}));
      p.add_constraint(std::move(discharge), Relation::LessEqual, pmax,
                       tag("discharge_limit", {{'k', k}, {'t', t}}));
      p.add_constraint(std::move(both), Relation::LessEqual, pmax,
                       tag("power_budget", {{'k', k}, {'t', t}}));
    }
  }

  for (std::size_t k = 0; k < B; ++k) {
    const auto& bess = scenario.bess_units[k];
    p.add_constraint({{map.soc(k, T - 1), 1.0}}, Relation::GreaterEqual,
                     bess.soc_terminal_min * bess.capacity_mwh, tag("terminal_soc", {{'k', k}}));
  }

  // Minimum dwell on the charge/discharge mode: a switch at t holds for
  // min_dwell_periods periods.
  if (options.dwell_time == DwellTimeMode::BinaryModes) {
    for (std::size_t k = 0; k < B; ++k) {
      const auto dwell = static_cast<std::size_t>(scenario.bess_units[k].min_dwell_periods);
      for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t s = 1; s < dwell && t + s < T; ++s) {
          p.add_constraint({{map.mode(k, t), 1.0}, {map.mode(k, t - 1), -1.0}, {map.mode(k, t + s), -1.0}},
                           Relation::LessEqual, 0.0, tag("dwell_on", {{'k', k}, {'t', t}, {'s', s}}));
          p.add_constraint({{map.mode(k, t - 1), 1.0}, {map.mode(k, t), -1.0}, {map.mode(k, t + s), 1.0}},
                           Relation::LessEqual, 1.0, tag("dwell_off", {{'k', k}, {'t', t}, {'s', s}}));
        }
      }
    }
  }

  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < N; ++i) row.push_back({map.grid(i, t), 1.0});
    row.push_back({map.peak(), -1.0});
    p.add_constraint(std::move(row), Relation::LessEqual, 0.0, tag("peak", {{'t', t}}));
  }

  const double ramp = scenario.ramp_limit_fraction;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 1; t < T; ++t) {
      const double limit = ramp * scenario.loads[i].demand[t];
      p.add_constraint({{map.grid(i, t), 1.0}, {map.grid(i, t - 1), -1.0}}, Relation::LessEqual,
                       limit, tag("ramp_up", {{'i', i}, {'t', t}}));
      p.add_constraint({{map.grid(i, t - 1), 1.0}, {map.grid(i, t), -1.0}}, Relation::LessEqual,
                       limit, tag("ramp_down", {{'i', i}, {'t', t}}));
    }
  }
  return model;
}

DispatchSchedule extract_schedule(const Scenario& scenario, const VariableMap& map,
                                  const std::vector<double>& values) {
  const std::size_t N = scenario.participants();
  const std::size_t S = scenario.solar_units.size();
  const std::size_t B = scenario.bess_units.size();
  const std::size_t T = scenario.periods();
  DispatchSchedule out(N, S, B, T);
  auto nonneg = [](double v) { return v < 0.0 ? 0.0 : v; };
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      out.grid(i, t) = nonneg(values[map.grid(i, t)]);
      for (std::size_t j = 0; j < S; ++j) out.alpha(i, j, t) = nonneg(values[map.alpha(i, j, t)]);
      for (std::size_t k = 0; k < B; ++k) {
        out.charge(i, k, t) = nonneg(values[map.charge(i, k, t)]);
        out.discharge(i, k, t) = nonneg(values[map.discharge(i, k, t)]);
      }
    }
  }
  for (std::size_t k = 0; k < B; ++k)
    for (std::size_t t = 0; t < T; ++t) out.soc(k, t) = values[map.soc(k, t)];
  // With no demand charge the peak column is free above the true peak.
  out.system_peak_mw = scenario.tariff.peak_charge_rate > 0.0 ? values[map.peak()]
                                                              : out.max_total_grid();
  return out;
}

CostBreakdown assemble_costs(const DispatchSchedule& schedule, const Tariff& tariff,
                             double period_hours, bool include_wear) {
  CostBreakdown out;
  double throughput = 0.0;
  for (std::size_t t = 0; t < schedule.periods(); ++t) {
    out.energy_cost += tariff.energy_price[t] * schedule.total_grid(t) * period_hours;
    for (std::size_t k = 0; k < schedule.batteries(); ++k)
      throughput += schedule.battery_charge(k, t) + schedule.battery_discharge(k, t);
  }
  out.peak_charge = tariff.peak_charge_rate * schedule.system_peak_mw;
  out.battery_wear_cost = tariff.battery_wear_cost * throughput * period_hours;
  out.wear_in_total = include_wear;
  out.total_cost = out.energy_cost + out.peak_charge + (include_wear ? out.battery_wear_cost : 0.0);
  return out;
}

CostBreakdown baseline_costs(const Scenario& scenario) {
  CostBreakdown out;
  const double h = scenario.time_grid.period_hours;
  for (std::size_t t = 0; t < scenario.periods(); ++t)
    out.energy_cost += scenario.tariff.energy_price[t] * scenario.total_load(t) * h;
  out.peak_charge = scenario.tariff.peak_charge_rate * scenario.original_peak();
  out.total_cost = out.energy_cost + out.peak_charge;
  return out;
}

std::vector<Finding> check_schedule(const DispatchSchedule& s, const Scenario& scenario,
                                    const DispatchOptions& options, double tol) {
  std::vector<Finding> out;
  auto fail = [&](std::string path, std::string reason) {
    out.push_back({std::move(path), std::move(reason)});
  };
  const std::size_t N = scenario.participants();
  const std::size_t S = scenario.solar_units.size();
  const std::size_t B = scenario.bess_units.size();
  const std::size_t T = scenario.periods();
  if (s.participants() != N || s.solar_units() != S || s.batteries() != B || s.periods() != T) {
    fail("schedule", "shape does not match scenario");
    return out;
  }
  const double h = scenario.time_grid.period_hours;
  const double eps = scenario.balance_tolerance;

  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto where = "i=" + std::to_string(i) + ",t=" + std::to_string(t);
      if (s.grid(i, t) < -tol) fail("grid_import[" + where + "]", "negative grid import");
      double supply = s.grid(i, t);
      for (std::size_t j = 0; j < S; ++j) {
        if (s.alpha(i, j, t) < -tol) fail("solar_alloc[" + where + "]", "negative allocation");
        supply += s.alpha(i, j, t) * scenario.solar_units[j].generation[t];
      }
      for (std::size_t k = 0; k < B; ++k) {
        if (s.charge(i, k, t) < -tol || s.discharge(i, k, t) < -tol)
          fail("battery_flow[" + where + "]", "negative charge or discharge");
        supply += s.discharge(i, k, t) - s.charge(i, k, t);
      }
      const double load = scenario.loads[i].demand[t];
      if (supply < load * (1.0 - eps) - tol || supply > load * (1.0 + eps) + tol)
        fail("balance[" + where + "]", "supply outside the load tolerance band");
    }
  }

  for (std::size_t j = 0; j < S; ++j) {
    for (std::size_t t = 0; t < T; ++t) {
      double share = 0.0;
      for (std::size_t i = 0; i < N; ++i) share += s.alpha(i, j, t);
      if (share > 1.0 + tol)
        fail("solar_alloc[j=" + std::to_string(j) + ",t=" + std::to_string(t) + "]",
             "solar allocated beyond 100%");
    }
  }

  const bool modes = options.anti_simultaneity == AntiSimultaneityMode::BinaryModes;
  for (std::size_t k = 0; k < B; ++k) {
    const auto& bess = scenario.bess_units[k];
    double previous = bess.soc_initial * bess.capacity_mwh;
    for (std::size_t t = 0; t < T; ++t) {
      const auto where = "k=" + std::to_string(k) + ",t=" + std::to_string(t);
      const double c = s.battery_charge(k, t);
      const double d = s.battery_discharge(k, t);
      const double expected = previous + h * (bess.charge_eff * c - d / bess.discharge_eff);
      if (std::abs(s.soc(k, t) - expected) > tol) fail("soc[" + where + "]", "SOC recursion broken");
      if (s.soc(k, t) < bess.soc_min * bess.capacity_mwh - tol ||
          s.soc(k, t) > bess.soc_max * bess.capacity_mwh + tol)
        fail("soc[" + where + "]", "SOC outside its limits");
      if (c > bess.power_limit_mw + tol) fail("charge[" + where + "]", "charge above power limit");
      if (d > bess.power_limit_mw + tol) fail("discharge[" + where + "]", "discharge above power limit");
      if (c + d > bess.power_limit_mw + tol)
        fail("power_budget[" + where + "]", "charge plus discharge above power limit");
      if (modes && c > tol && d > tol)
        fail("modes[" + where + "]", "simultaneous charge and discharge");
      previous = s.soc(k, t);
    }
    if (s.soc(k, T - 1) < bess.soc_terminal_min * bess.capacity_mwh - tol)
      fail("soc[k=" + std::to_string(k) + ",terminal]", "terminal SOC below requirement");
  }

  for (std::size_t t = 0; t < T; ++t)
    if (s.total_grid(t) > s.system_peak_mw + tol)
      fail("system_peak[t=" + std::to_string(t) + "]", "grid import above declared peak");

  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 1; t < T; ++t) {
      const double limit = scenario.ramp_limit_fraction * scenario.loads[i].demand[t];
      if (std::abs(s.grid(i, t) - s.grid(i, t - 1)) > limit + tol)
        fail("ramp[i=" + std::to_string(i) + ",t=" + std::to_string(t) + "]",
             "grid ramp above limit");
    }
  }
  return out;
}

DispatchResult optimize_dispatch(const Scenario& scenario, const DispatchOptions& options,
                                 const lp::Solver& solver) {
  const auto started = std::chrono::steady_clock::now();
  auto model = build_model(scenario, options);
  const auto solution = solver.solve(model.problem, options.solve_options);

  if (solution.status == lp::Status::Infeasible) {
    const std::string row = solution.infeasible_row
                                ? model.problem.constraints()[*solution.infeasible_row].name
                                : std::string("<unknown>");
    throw InfeasibleError(row, "dispatch model is infeasible; first violated constraint: " + row);
  }
  if (solution.status == lp::Status::Unbounded)
    throw Error("dispatch model is unbounded; check tariff signs");
  if (!solution.has_incumbent())
    throw TimeLimitError("solver time limit reached without a feasible dispatch schedule");

  DispatchResult out;
  out.schedule = extract_schedule(scenario, model.map, solution.values);
  out.status = solution.status;
  out.objective = solution.objective_value;
  out.achieved_gap = solution.achieved_gap;
  out.iterations = solution.iterations;
  out.nodes = solution.nodes;

  const auto findings = check_schedule(out.schedule, scenario, options);
  if (!findings.empty()) {
    std::string msg = "optimized schedule failed the physics re-check:";
    for (const auto& f : findings) msg += "\n  " + f.path + ": " + f.reason;
    throw Error(msg);
  }
  out.costs = assemble_costs(out.schedule, scenario.tariff, scenario.time_grid.period_hours,
                             options.include_wear_in_objective);
  out.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

} // namespace gridshare
