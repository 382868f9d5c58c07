#include "gridshare/dispatch.hpp"
#include "gridshare/synthetic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace gridshare;

namespace {

Scenario tiny(std::vector<std::vector<double>> loads, std::vector<double> prices) {
  Scenario s;
  s.time_grid = {prices.size(), 1.0};
  for (std::size_t i = 0; i < loads.size(); ++i)
    s.loads.push_back({"L" + std::to_string(i + 1), std::move(loads[i])});
  s.tariff.energy_price = std::move(prices);
  return s;
}

void require_physics(const DispatchResult& r, const Scenario& s, bool exclusive) {
  const auto v = oracle::physics_violations(r.schedule, s, exclusive);
  for (const auto& msg : v) MESSAGE(msg);
  REQUIRE(v.empty());
}

} // namespace

TEST_SUITE("dispatch") {

TEST_CASE("hand-countable model") {
  const auto s = tiny({{1.0, 1.0}}, {100, 200});
  const auto m = build_model(s);
  CHECK(m.problem.variable_count() == 3);
  CHECK(m.problem.names()[m.map.grid(0, 0)] == "G_i0_t0");
  CHECK(m.problem.names()[m.map.peak()] == "P_peak");
  std::size_t balance = 0, peak = 0, ramp = 0;
  for (const auto& row : m.problem.constraints()) {
    if (row.name.rfind("balance", 0) == 0) ++balance;
    if (row.name.rfind("peak", 0) == 0) ++peak;
    if (row.name.rfind("ramp", 0) == 0) ++ramp;
  }
  CHECK(balance == 4);
  CHECK(peak == 2);
  CHECK(ramp == 2);
  CHECK(m.problem.constraint_count() == 8);
}

TEST_CASE("binary count by anti-simultaneity mode") {
  const auto s = generate_synthetic(1);
  CHECK(build_model(s).problem.binaries().empty());
  DispatchOptions o;
  o.anti_simultaneity = AntiSimultaneityMode::BinaryModes;
  CHECK(build_model(s, o).problem.binaries().size() == 48);
  CHECK(build_model(s, DispatchOptions::binary_modes()).problem.binaries().size() == 48);
}

TEST_CASE("dwell without binary modes is rejected") {
  DispatchOptions o;
  o.dwell_time = DwellTimeMode::BinaryModes;
  CHECK_THROWS_AS(build_model(generate_synthetic(1), o), std::invalid_argument);
}

TEST_CASE("invalid scenario is rejected before solving") {
  auto s = generate_synthetic(1);
  s.tariff.energy_price.pop_back();
  CHECK_THROWS_AS(optimize_dispatch(s), ValidationError);
}

TEST_CASE("idle system costs nothing") {
  auto s = tiny({{0.0, 0.0, 0.0}}, {100, 150, 200});
  s.solar_units = {{"PV1", {0.0, 0.3, 0.0}, 1.5}};
  BessSpec b;
  b.unit_id = "B1";
  b.soc_initial = b.soc_terminal_min = 0.4;
  s.bess_units = {b};
  const auto r = optimize_dispatch(s);
  CHECK(r.costs.total_cost == doctest::Approx(0.0));
  for (std::size_t t = 0; t < 3; ++t) CHECK(r.schedule.grid(0, t) == doctest::Approx(0.0));
  require_physics(r, s, false);
}

TEST_CASE("no degrees of freedom beyond the tolerance band") {
  const auto s = tiny({{1.0, 1.0}}, {100, 200});
  const auto r = optimize_dispatch(s);
  const double eps = s.balance_tolerance;
  CHECK(r.schedule.grid(0, 0) == doctest::Approx(1.0 - eps));
  CHECK(r.schedule.grid(0, 1) == doctest::Approx(1.0 - eps));
  CHECK(r.costs.energy_cost == doctest::Approx(300.0 * (1.0 - eps)));
  CHECK(r.costs.peak_charge == doctest::Approx(8700.0 * (1.0 - eps)));

  auto exact = s;
  exact.balance_tolerance = 0.0;
  const auto e = optimize_dispatch(exact);
  CHECK(e.schedule.grid(0, 0) == doctest::Approx(1.0));
  CHECK(e.costs.energy_cost == doctest::Approx(300.0));
  CHECK(e.costs.peak_charge == doctest::Approx(8700.0));
}

TEST_CASE("single battery shifts energy to the expensive period") {
  auto s = tiny({{0.5, 0.5}}, {100, 300});
  s.balance_tolerance = 0.0;
  s.ramp_limit_fraction = 1.0;
  s.tariff.peak_charge_rate = 0.0;
  BessSpec b;
  b.unit_id = "B1";
  b.capacity_mwh = 1.0;
  b.power_limit_mw = 0.5;
  b.charge_eff = b.discharge_eff = 1.0;
  b.soc_initial = 0.5;
  b.soc_min = 0.0;
  b.soc_max = 1.0;
  b.soc_terminal_min = 0.0;
  s.bess_units = {b};

  // Grid search over discharge in each period; no charging can pay back
  // at equal or lower price.
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= 50; ++a) {
    for (int c = 0; c <= 50; ++c) {
      const double d0 = a * 0.01, d1 = c * 0.01;
      if (d0 + d1 > 0.5 + 1e-12) continue;
      const double g0 = 0.5 - d0, g1 = 0.5 - d1;
      if (std::abs(g1 - g0) > 0.5 + 1e-12) continue;
      best = std::min(best, 100 * g0 + 300 * g1);
    }
  }
  CHECK(best == doctest::Approx(50.0));

  const auto r = optimize_dispatch(s);
  CHECK(r.costs.energy_cost == doctest::Approx(best).epsilon(1e-9));
  CHECK(r.schedule.discharge(0, 0, 1) == doctest::Approx(0.5));
  CHECK(r.schedule.soc(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
  require_physics(r, s, false);
}

TEST_CASE("cost assembly arithmetic") {
  Tariff tariff;
  tariff.energy_price.assign(24, 100.0);
  DispatchSchedule sched(1, 0, 0, 24);
  sched.system_peak_mw = 0.78631;
  const auto peak_only = assemble_costs(sched, tariff);
  CHECK(std::abs(peak_only.peak_charge - 6840.90) <= 0.05);

  const auto zero = assemble_costs(DispatchSchedule(1, 0, 0, 24), tariff);
  CHECK(zero.energy_cost == 0.0);
  CHECK(zero.peak_charge == 0.0);
  CHECK(zero.total_cost == 0.0);

  for (std::size_t t = 0; t < 24; ++t) sched.grid(0, t) = 1.0;
  const auto flat = assemble_costs(sched, tariff);
  CHECK(flat.energy_cost == doctest::Approx(2400.0));

  DispatchSchedule with_battery(1, 0, 1, 2);
  with_battery.charge(0, 0, 0) = 0.5;
  with_battery.discharge(0, 0, 1) = 0.25;
  Tariff two;
  two.energy_price = {100, 100};
  const auto half_hour = assemble_costs(with_battery, two, 0.5, false);
  CHECK(half_hour.battery_wear_cost == doctest::Approx(10.0 * 0.75 * 0.5));
  CHECK(half_hour.total_cost == doctest::Approx(0.0));
  CHECK(assemble_costs(with_battery, two, 0.5, true).total_cost ==
        doctest::Approx(half_hour.battery_wear_cost));
}

TEST_CASE("baseline costs") {
  const auto flat = tiny({std::vector<double>(24, 0.1)}, std::vector<double>(24, 100.0));
  const auto b = baseline_costs(flat);
  CHECK(b.energy_cost == doctest::Approx(240.0));
  CHECK(b.peak_charge == doctest::Approx(870.0));

  const auto offset = tiny({{1.0, 0.0}, {0.0, 1.0}}, {100, 100});
  CHECK(offset.original_peak() == 1.0);
  CHECK(baseline_costs(offset).peak_charge == doctest::Approx(8700.0));
}

TEST_CASE("exact balance without assets reproduces the baseline") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 5; ++k) {
    auto s = oracle::random_scenario(rng, 3, 0, 0, 6);
    s.balance_tolerance = 0.0;
    const auto r = optimize_dispatch(s);
    const auto b = baseline_costs(s);
    CHECK(r.costs.energy_cost == doctest::Approx(b.energy_cost).epsilon(1e-9));
    CHECK(r.costs.peak_charge == doctest::Approx(b.peak_charge).epsilon(1e-9));
  }
}

TEST_CASE("optimized schedules satisfy every operating rule") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 8; ++k) {
    CAPTURE(k);
    const auto s = oracle::random_scenario(rng, 3, 2, 2, 8);
    const auto r = optimize_dispatch(s);
    require_physics(r, s, false);
    CHECK(check_schedule(r.schedule, s).empty());
    // The peak column sits on the true peak when it is billed.
    CHECK(r.schedule.system_peak_mw == doctest::Approx(r.schedule.max_total_grid()).epsilon(1e-7));
    const auto direct = oracle::costs_of(r.schedule, s);
    CHECK(r.costs.energy_cost == doctest::Approx(direct.energy).epsilon(1e-9));
    CHECK(r.costs.peak_charge == doctest::Approx(direct.peak).epsilon(1e-9));
    CHECK(r.costs.battery_wear_cost == doctest::Approx(direct.wear).epsilon(1e-9));
  }
}

TEST_CASE("optimization never loses to the grid-only baseline") {
  for (auto profile : kAllProfiles) {
    const auto s = generate_synthetic(11, {}, profile);
    const auto r = optimize_dispatch(s);
    const auto b = baseline_costs(s);
    CHECK(r.costs.total_cost <= b.total_cost + 1e-6);
    require_physics(r, s, false);
  }
}

TEST_CASE("wider tolerance band or extra solar never raises cost") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 4; ++k) {
    auto s = oracle::random_scenario(rng, 2, 1, 1, 6);
    const double base = optimize_dispatch(s).costs.total_cost;
    auto loose = s;
    loose.balance_tolerance = 0.05;
    CHECK(optimize_dispatch(loose).costs.total_cost <= base + 1e-6);
    auto sunny = s;
    sunny.solar_units.push_back({"S_extra", std::vector<double>(6, 0.3), 0.6});
    CHECK(optimize_dispatch(sunny).costs.total_cost <= base + 1e-6);
  }
}

TEST_CASE("strict modes cost at least the relaxed budget") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 3; ++k) {
    const auto s = oracle::random_scenario(rng, 2, 1, 2, 6);
    const auto relaxed = optimize_dispatch(s);
    auto o = DispatchOptions::binary_modes();
    o.solve_options.gap_tolerance = 0.0;
    const auto strict = optimize_dispatch(s, o);
    CHECK(strict.costs.total_cost >= relaxed.costs.total_cost - 1e-6);
    require_physics(strict, s, true);
    CHECK(check_schedule(strict.schedule, s, o).empty());
  }
}

TEST_CASE("wear in the objective only changes the total") {
  const auto s = generate_synthetic(2, {4, 1, 1, 12});
  DispatchOptions o;
  o.include_wear_in_objective = true;
  const auto r = optimize_dispatch(s, o);
  CHECK(r.costs.wear_in_total);
  CHECK(r.costs.total_cost ==
        doctest::Approx(r.costs.energy_cost + r.costs.peak_charge + r.costs.battery_wear_cost));
  CHECK(r.objective == doctest::Approx(r.costs.total_cost).epsilon(1e-7));
}

TEST_CASE("unreachable terminal charge is reported as infeasible") {
  auto s = tiny({{0.2, 0.2}}, {100, 100});
  BessSpec b;
  b.unit_id = "B1";
  b.soc_initial = 0.15;
  b.soc_terminal_min = 0.95;
  b.power_limit_mw = 0.01;
  s.bess_units = {b};
  try {
    (void)optimize_dispatch(s);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK_FALSE(e.row_name().empty());
    CHECK(std::string(e.what()).find(e.row_name()) != std::string::npos);
  }
}

TEST_CASE("check_schedule flags a broken schedule") {
  const auto s = tiny({{1.0, 1.0}}, {100, 200});
  auto r = optimize_dispatch(s);
  r.schedule.grid(0, 1) = 0.5;
  CHECK_FALSE(check_schedule(r.schedule, s).empty());
  CHECK_FALSE(oracle::physics_violations(r.schedule, s, false).empty());
}

TEST_CASE("repeated optimization is deterministic") {
  const auto s = generate_synthetic(4, {5, 2, 2, 12});
  const auto a = optimize_dispatch(s);
  const auto b = optimize_dispatch(s);
  CHECK(a.schedule == b.schedule);
  CHECK(a.objective == b.objective);
}

}
