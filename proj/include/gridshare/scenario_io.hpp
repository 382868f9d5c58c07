#pragma once

#include "gridshare/allocation.hpp"
#include "gridshare/dispatch.hpp"
#include "gridshare/scenario.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridshare {

/// Everything one pipeline run needs. Paths are absolute or relative to
/// the working directory once loaded (config-relative paths are resolved
/// by load_config).
struct RunConfig {
  std::filesystem::path loads_csv;
  std::filesystem::path solar_csv;   // empty: no solar units
  std::filesystem::path prices_csv;
  double period_hours = 1.0;
  double balance_tolerance = 0.001;
  double ramp_limit_fraction = 0.2;

  double peak_charge_rate = 8700.0;
  double battery_wear_cost = 10.0;
  double grid_fixed_cost = 1000.0;

  double solar_rated_capacity = 1.5;
  std::map<std::string, double> solar_rated_by_id;

  /// Fully merged battery specs, in declaration order.
  std::vector<BessSpec> bess_units = {BessSpec{.unit_id = "BESS1"}, BessSpec{.unit_id = "BESS2"}};

  DispatchOptions dispatch;
  StandalonePolicy standalone = StandalonePolicy::GridOnly;
  std::size_t parallelism = 1;
  std::filesystem::path output_dir;
};

/// Reads an INI-style config. Unknown sections or keys and malformed
/// values raise ValidationError with `section.key` paths; an unreadable
/// file raises IoError.
RunConfig load_config(const std::filesystem::path& path);

/// Parses the CSV inputs named by `config` and returns a validated
/// scenario. Cell-level problems are reported as `file:line:column`.
Scenario load_scenario(const RunConfig& config);

/// Writes loads.csv, solar.csv, prices.csv and config.ini into `dir` so
/// that load_scenario(load_config(dir/"config.ini")) reproduces `scenario`
/// exactly.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

/// Shortest text that parses back to the same double.
std::string format_number(double value);

/// One parsed CSV table: header names after the period column, and one
/// column vector per name.
struct CsvTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;
};

/// Reads a table whose first column is the period index 0..rows-1.
CsvTable read_csv_table(const std::filesystem::path& path);

/// Writes a header line and rows of numbers; the first column is written
/// as an integer period index.
void write_csv_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Writes text to a file, replacing it. Throws IoError naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

} // namespace gridshare
