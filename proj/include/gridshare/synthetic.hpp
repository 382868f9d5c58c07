#pragma once

#include "gridshare/scenario.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace gridshare {

enum class Profile { PeakDay, LowDay, HighPrice, HighSolar, Weekday, Weekend };

inline constexpr std::array<Profile, 6> kAllProfiles{Profile::PeakDay,   Profile::LowDay,
                                                     Profile::HighPrice, Profile::HighSolar,
                                                     Profile::Weekday,   Profile::Weekend};

const char* to_string(Profile profile);
/// Accepts the kebab-case names printed by to_string ("peak-day", ...).
Profile parse_profile(std::string_view name);

struct ScenarioShape {
  std::size_t participants = 10;
  std::size_t solar_units = 2;
  std::size_t batteries = 2;
  std::size_t periods = 24;
};

inline constexpr double kMinLoadPeakMw = 0.15;
inline constexpr double kMaxLoadPeakMw = 0.25;
inline constexpr double kMinPrice = 68.90;
inline constexpr double kMaxPrice = 339.91;

/// Deterministic diurnal scenario. Per-load peaks fall in [0.15, 0.25] MW,
/// prices in [68.90, 339.91] $/MWh, and hour-to-hour load changes stay
/// within 15% so the grid-only schedule always meets the 20% ramp limit.
/// Equipment and tariff parameters take their defaults.
Scenario generate_synthetic(std::uint64_t seed, ScenarioShape shape = {},
                            Profile profile = Profile::Weekday);

} // namespace gridshare
