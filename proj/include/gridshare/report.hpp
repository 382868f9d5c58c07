#pragma once

#include "gridshare/allocation.hpp"
#include "gridshare/dispatch.hpp"
#include "gridshare/fairness.hpp"
#include "gridshare/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gridshare {

// Report files hold results only. Wall-clock timings are left out so that
// identical inputs always produce identical bytes.

struct RunReport {
  Scenario scenario;
  std::string mode = "lp";
  DispatchResult dispatch;
  CostBreakdown baseline;
  std::optional<AllocationReport> allocation;
  StandalonePolicy standalone_policy = StandalonePolicy::GridOnly;
  std::optional<std::vector<double>> standalone_costs;
  std::optional<FairnessReport> fairness;
};

std::string mode_name(const DispatchOptions& options);

nlohmann::ordered_json schedule_to_json(const RunReport& report);
/// Rebuilds the dispatch part of a report for `scenario`. Throws
/// ValidationError when ids or dimensions disagree with the scenario.
DispatchResult schedule_from_json(const nlohmann::json& doc, const Scenario& scenario);

nlohmann::ordered_json allocation_to_json(const Scenario& scenario,
                                          const AllocationReport& allocation);
AllocationReport allocation_from_json(const nlohmann::json& doc, const Scenario& scenario);

nlohmann::ordered_json fairness_to_json(const RunReport& report);

/// The complete structured report: scenario summary, costs, schedule,
/// allocation and fairness (when present).
nlohmann::ordered_json report_to_json(const RunReport& report);

/// Text of a JSON document as written to disk.
std::string dump(const nlohmann::ordered_json& doc);

/// Plot-data tables. Each returns the path written.
std::filesystem::path write_system_power(const RunReport& report, const std::filesystem::path& dir);
std::filesystem::path write_battery_soc(const RunReport& report, const std::filesystem::path& dir);
std::filesystem::path write_allocation_by_load(const RunReport& report,
                                               const std::filesystem::path& dir);

/// Writes report.json and every plot-data table the report has data for.
/// Returns the files written, in a fixed order.
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::filesystem::path& out_dir);

} // namespace gridshare
