#include "gridshare/fairness.hpp"
#include "gridshare/synthetic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gridshare;

namespace {

AllocationReport manual(std::vector<double> solar, std::vector<double> peak,
                        std::vector<double> wear, std::vector<double> grid) {
  AllocationReport r;
  r.participants = solar.size();
  r.phi[static_cast<std::size_t>(Component::SolarBenefit)] = std::move(solar);
  r.phi[static_cast<std::size_t>(Component::PeakSavings)] = std::move(peak);
  r.phi[static_cast<std::size_t>(Component::BessCost)] = std::move(wear);
  r.phi[static_cast<std::size_t>(Component::GridCost)] = std::move(grid);
  return r;
}

} // namespace

TEST_SUITE("fairness") {

TEST_CASE("net positions from benefit and cost shares") {
  const auto r = manual({50, 30}, {10, 10}, {2, 2}, {48, 48});
  const auto np = net_positions(r);
  REQUIRE(np.has_value());
  CHECK((*np)[0] == doctest::Approx(0.1));
  CHECK((*np)[1] == doctest::Approx(-0.1));

  const auto even = manual({30, 60}, {0, 0}, {1, 2}, {9, 18});
  const auto zero = net_positions(even);
  REQUIRE(zero.has_value());
  CHECK(std::abs((*zero)[0]) <= 1e-15);
  CHECK(std::abs((*zero)[1]) <= 1e-15);
}

TEST_CASE("net positions are undefined without benefit or cost") {
  CHECK_FALSE(net_positions(manual({0, 0}, {0, 0}, {1, 1}, {5, 5})).has_value());
  CHECK_FALSE(net_positions(manual({1, 1}, {0, 0}, {0, 0}, {0, 0})).has_value());
}

TEST_CASE("cooperative gain") {
  const std::vector<double> standalone{12420.93};
  const auto g = cooperative_gain(standalone, 10805.21);
  CHECK(std::round(g.total * 100) / 100 == 1615.72);

  // Ten participants sharing the same standalone sum.
  const std::vector<double> ten(10, 1242.093);
  const auto g10 = cooperative_gain(ten, 10805.21);
  CHECK(std::round(g10.total * 100) / 100 == 1615.72);
  CHECK(std::round(g10.average * 100) / 100 == 161.57);

  const std::vector<double> same{100.0, 200.0};
  CHECK(cooperative_gain(same, 300.0).total == 0.0);
  CHECK_THROWS_AS(cooperative_gain(std::vector<double>{}, 1.0), Error);
}

TEST_CASE("load proportions and deviations") {
  Scenario s;
  s.time_grid = {3, 1.0};
  for (int i = 0; i < 10; ++i) s.loads.push_back({"L" + std::to_string(i), {0.2, 0.1, 0.3}});
  s.tariff.energy_price = {100, 100, 100};
  const auto lp = load_proportions(s);
  REQUIRE(lp.has_value());
  for (double v : *lp) CHECK(v == doctest::Approx(0.1));

  const std::vector<double> np{0.3, -0.2, 0.05};
  CHECK(deviations(np, np) == std::vector<double>{0.0, 0.0, 0.0});

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(7), b(7);
  for (int i = 0; i < 7; ++i) a[i] = u(rng), b[i] = u(rng);
  const auto d = deviations(a, b);
  for (int i = 0; i < 7; ++i) CHECK(d[i] == std::fabs(a[i] - b[i]));
  CHECK_THROWS_AS(deviations(a, std::vector<double>(3)), Error);

  for (auto& l : s.loads) l.demand = {0, 0, 0};
  CHECK_FALSE(load_proportions(s).has_value());
}

TEST_CASE("peak reduction efficiency") {
  const auto pre = peak_reduction_efficiency(0.853, 0.786);
  REQUIRE(pre.has_value());
  CHECK(std::abs(*pre * 100 - 7.8) <= 0.1);
  CHECK_FALSE(peak_reduction_efficiency(0.0, 0.0).has_value());
}

TEST_CASE("battery cycling and solar utilization") {
  Scenario s;
  s.time_grid = {4, 1.0};
  s.loads = {{"A", {0.3, 0.3, 0.3, 0.3}}};
  s.tariff.energy_price = {100, 100, 100, 100};
  s.solar_units = {{"PV", {0.0, 0.2, 0.4, 0.0}, 1.5}};
  BessSpec b;
  b.unit_id = "B";
  s.bess_units = {b, b};
  s.bess_units[1].unit_id = "B2";
  DispatchSchedule sched(1, 1, 2, 4);
  sched.alpha(0, 0, 1) = 1.0;
  sched.alpha(0, 0, 2) = 1.0;
  sched.discharge(0, 1, 0) = 0.25;
  sched.discharge(0, 1, 3) = 0.24;
  sched.system_peak_mw = 0.3;
  const auto m = synergy_metrics(sched, s);
  REQUIRE(m.bess_cycling.size() == 2);
  CHECK(m.bess_cycling[0] == 0.0);
  CHECK(m.bess_cycling[1] == doctest::Approx(0.49));
  REQUIRE(m.solar_utilization_rate.has_value());
  CHECK(*m.solar_utilization_rate == doctest::Approx(1.0));
  CHECK(*m.effective_solar_utilization >= *m.solar_utilization_rate);
  CHECK(*m.peak_reduction_efficiency == doctest::Approx(0.0));

  sched.alpha(0, 0, 2) = 0.5;
  CHECK(*synergy_metrics(sched, s).solar_utilization_rate == doctest::Approx((0.2 + 0.2) / 0.6));
  sched.alpha(0, 0, 2) = 1.5;
  CHECK_THROWS_AS(synergy_metrics(sched, s), Error);
}

TEST_CASE("solar routed through a battery is credited") {
  Scenario s;
  s.time_grid = {2, 1.0};
  s.loads = {{"A", {0.1, 0.5}}};
  s.tariff.energy_price = {100, 300};
  s.solar_units = {{"PV", {0.5, 0.0}, 1.5}};
  BessSpec b;
  b.unit_id = "B";
  b.charge_eff = b.discharge_eff = 1.0;
  b.soc_initial = 0.15;
  s.bess_units = {b};
  DispatchSchedule sched(1, 1, 1, 2);
  sched.alpha(0, 0, 0) = 1.0;
  sched.charge(0, 0, 0) = 0.4;
  sched.discharge(0, 0, 1) = 0.4;
  sched.grid(0, 1) = 0.1;
  sched.soc(0, 0) = 0.55;
  sched.soc(0, 1) = 0.15;
  const auto m = synergy_metrics(sched, s);
  CHECK(*m.solar_utilization_rate == doctest::Approx(1.0));
  // 0.55 stored, 0.4 of it solar; 0.4 drawn carries 0.4·0.4/0.55.
  CHECK(*m.effective_solar_utilization == doctest::Approx((0.5 + 0.4 * 0.4 / 0.55) / 0.5));
}

TEST_CASE("metrics without solar are undefined") {
  Scenario s;
  s.time_grid = {2, 1.0};
  s.loads = {{"A", {0.1, 0.1}}};
  s.tariff.energy_price = {100, 100};
  DispatchSchedule sched(1, 0, 0, 2);
  const auto m = synergy_metrics(sched, s);
  CHECK_FALSE(m.solar_utilization_rate.has_value());
  CHECK_FALSE(m.effective_solar_utilization.has_value());
}

TEST_CASE("identities on optimized scenarios") {
  for (auto profile : kAllProfiles) {
    const auto s = generate_synthetic(12, {6, 2, 2, 24}, profile);
    const auto r = optimize_dispatch(s);
    const auto alloc = allocate(r.schedule, s);
    const auto standalone = standalone_costs(s);
    const auto f = analyze_fairness(r.schedule, s, alloc, standalone, r.costs.total_cost);
    REQUIRE(f.net_position.has_value());
    REQUIRE(f.load_proportion.has_value());
    REQUIRE(f.proportionality_deviation.has_value());
    double np_sum = 0.0, lp_sum = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      np_sum += (*f.net_position)[i];
      lp_sum += (*f.load_proportion)[i];
      CHECK((*f.proportionality_deviation)[i] ==
            std::fabs((*f.net_position)[i] - (*f.load_proportion)[i]));
    }
    CHECK(std::abs(np_sum) <= 1e-9);
    CHECK(lp_sum == doctest::Approx(1.0));
    REQUIRE(f.synergy.solar_utilization_rate.has_value());
    CHECK(*f.synergy.solar_utilization_rate <= 1.0 + 1e-9);
    CHECK(*f.synergy.solar_utilization_rate >= 0.0);
    CHECK(*f.synergy.peak_reduction_efficiency >= -1e-9);
    CHECK(*f.synergy.peak_reduction_efficiency <= 1.0);
    const double orig = s.original_peak();
    CHECK(*f.synergy.peak_reduction_efficiency ==
          doctest::Approx((orig - r.schedule.max_total_grid()) / orig).epsilon(1e-7));
    for (std::size_t k = 0; k < s.bess_units.size(); ++k) {
      const auto& b = s.bess_units[k];
      CHECK(f.synergy.bess_cycling[k] >= 0.0);
      CHECK(f.synergy.bess_cycling[k] <=
            s.periods() * b.power_limit_mw * s.time_grid.period_hours / b.capacity_mwh + 1e-9);
    }
    CHECK(f.cooperative_gain >= -1e-6);
  }
}

}
