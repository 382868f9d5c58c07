#include "gridshare/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace gridshare {

const char* to_string(Profile profile) {
  switch (profile) {
  case Profile::PeakDay: return "peak-day";
  case Profile::LowDay: return "low-day";
  case Profile::HighPrice: return "high-price";
  case Profile::HighSolar: return "high-solar";
  case Profile::Weekday: return "weekday";
  case Profile::Weekend: return "weekend";
  }
  return "weekday";
}

Profile parse_profile(std::string_view name) {
  for (Profile p : kAllProfiles)
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown profile '" + std::string(name) +
                              "' (expected peak-day, low-day, high-price, high-solar, weekday, "
                              "weekend)");
}

namespace {

// Uniform draws built directly from the engine's bits so sequences do not
// depend on the standard library's distribution implementation.
class Draw {
public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
  std::mt19937_64 engine_;
};

double bump(double hour, double centre, double width) {
  const double z = (hour - centre) / width;
  return std::exp(-0.5 * z * z);
}

struct ProfileParams {
  double peak_lo, peak_hi;          // per-load peak MW
  double commercial_weight;         // share of daytime-plateau shape
  double solar_fraction;            // clear-sky peak as a fraction of rating
  double sunrise, sunset;
  double price_lo, price_hi;
};

ProfileParams params_for(Profile profile) {
  switch (profile) {
  case Profile::PeakDay: return {0.21, 0.25, 0.45, 0.05, 7.5, 16.5, 75.0, 300.0};
  case Profile::LowDay: return {0.15, 0.18, 0.40, 0.25, 6.0, 20.0, kMinPrice, 180.0};
  case Profile::HighPrice: return {0.17, 0.23, 0.45, 0.30, 6.5, 19.0, 109.06, kMaxPrice};
  case Profile::HighSolar: return {0.16, 0.22, 0.45, 0.90, 5.5, 20.5, kMinPrice, 200.0};
  case Profile::Weekday: return {0.16, 0.23, 0.55, 0.75, 5.5, 20.5, kMinPrice, 220.0};
  case Profile::Weekend: return {0.15, 0.22, 0.15, 0.70, 5.5, 20.5, kMinPrice, 190.0};
  }
  return params_for(Profile::Weekday);
}

} // namespace

Scenario generate_synthetic(std::uint64_t seed, ScenarioShape shape, Profile profile) {
  if (shape.participants == 0 || shape.periods == 0)
    throw std::invalid_argument("synthetic shape needs at least one participant and period");
  const auto prm = params_for(profile);
  Draw draw(seed);

  Scenario s;
  s.time_grid.period_count = shape.periods;
  s.time_grid.period_hours = 24.0 / static_cast<double>(shape.periods);
  const std::size_t T = shape.periods;
  auto hour_of = [&](std::size_t t) { return (static_cast<double>(t) + 0.5) * s.time_grid.period_hours; };

  // Hour-to-hour relative change allowed after smoothing; scaled with the
  // period length so finer grids stay inside the ramp limit too.
  const double max_step = 0.15 * std::min(1.0, s.time_grid.period_hours);

  for (std::size_t i = 0; i < shape.participants; ++i) {
    LoadProfile load;
    load.participant_id = "L" + std::to_string(i + 1);
    const double peak = draw.between(prm.peak_lo, prm.peak_hi);
    const double commercial = std::clamp(prm.commercial_weight + draw.between(-0.3, 0.3), 0.0, 1.0);
    const double evening = draw.between(18.0, 20.5);
    std::vector<double> raw(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double h = hour_of(t);
      const double residential = 0.45 + 0.25 * bump(h, 7.5, 1.8) + 0.55 * bump(h, evening, 2.8);
      const double office = 0.35 + 0.65 * bump(h, 13.0, 3.8);
      raw[t] = ((1.0 - commercial) * residential + commercial * office) * draw.between(0.95, 1.05);
    }
    for (std::size_t t = 1; t < T; ++t)
      raw[t] = std::clamp(raw[t], raw[t - 1] / (1.0 + max_step), raw[t - 1] / (1.0 - max_step));
    const double top = *std::max_element(raw.begin(), raw.end());
    load.demand.resize(T);
    for (std::size_t t = 0; t < T; ++t) load.demand[t] = raw[t] / top * peak;
    s.loads.push_back(std::move(load));
  }

  for (std::size_t j = 0; j < shape.solar_units; ++j) {
    SolarUnit unit;
    unit.unit_id = "PV" + std::to_string(j + 1);
    unit.rated_capacity = 1.5;
    unit.generation.resize(T);
    const double clearness = prm.solar_fraction * draw.between(0.85, 1.0);
    for (std::size_t t = 0; t < T; ++t) {
      const double h = hour_of(t);
      double g = 0.0;
      if (h > prm.sunrise && h < prm.sunset) {
        const double phase = (h - prm.sunrise) / (prm.sunset - prm.sunrise);
        g = std::sin(std::numbers::pi * phase) * clearness * draw.between(0.85, 1.0);
      }
      unit.generation[t] = std::clamp(g * unit.rated_capacity, 0.0, unit.rated_capacity);
    }
    s.solar_units.push_back(std::move(unit));
  }

  for (std::size_t k = 0; k < shape.batteries; ++k) {
    BessSpec bess;
    bess.unit_id = "BESS" + std::to_string(k + 1);
    s.bess_units.push_back(bess);
  }

  s.tariff.energy_price.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double h = hour_of(t);
    double level = 0.05;
    if (h >= 7.0 && h < 16.0) level = 0.35;
    if (h >= 16.0 && h < 21.0) level = 1.0;
    if (h >= 21.0 && h < 23.0) level = 0.35;
    const double price = prm.price_lo + (prm.price_hi - prm.price_lo) * level * draw.between(0.92, 1.0);
    s.tariff.energy_price[t] = std::clamp(price, kMinPrice, kMaxPrice);
  }
  return s;
}

} // namespace gridshare
