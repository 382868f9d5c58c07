#include "gridshare/report.hpp"

#include "gridshare/scenario_io.hpp"

#include <fstream>

namespace gridshare {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kSolarNote =
    "solar_utilization_rate is allocated solar over available solar in the same period and "
    "cannot exceed 1. effective_solar_utilization also credits battery discharge that was "
    "charged from solar, so stored solar is counted when allocated and again when discharged; "
    "it can exceed 1 and is the only one of the two that can report utilization above 100%.";

[[noreturn]] void bad(const std::string& path, const std::string& reason) {
  throw ValidationError({Finding{path, reason}});
}

ordered_json costs_json(const CostBreakdown& c) {
  ordered_json out;
  out["energy_cost_usd"] = c.energy_cost;
  out["peak_charge_usd"] = c.peak_charge;
  out["battery_wear_cost_usd"] = c.battery_wear_cost;
  out["total_cost_usd"] = c.total_cost;
  out["wear_in_total"] = c.wear_in_total;
  return out;
}

ordered_json undefined(const std::string& reason) { return ordered_json{{"undefined", reason}}; }

ordered_json by_id(const std::vector<std::string>& ids, const std::vector<double>& values) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = values[i];
  return out;
}

std::vector<std::string> participant_ids(const Scenario& s) {
  std::vector<std::string> ids;
  for (const auto& l : s.loads) ids.push_back(l.participant_id);
  return ids;
}

std::vector<std::string> solar_ids(const Scenario& s) {
  std::vector<std::string> ids;
  for (const auto& u : s.solar_units) ids.push_back(u.unit_id);
  return ids;
}

std::vector<std::string> bess_ids(const Scenario& s) {
  std::vector<std::string> ids;
  for (const auto& b : s.bess_units) ids.push_back(b.unit_id);
  return ids;
}

const json& member(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.is_object() || !doc.contains(key)) bad(path + "." + key, "missing field");
  return doc.at(key);
}

double number_at(const json& doc, const std::string& key, const std::string& path) {
  const auto& v = member(doc, key, path);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> series_at(const json& doc, const std::string& key, const std::string& path,
                              std::size_t length) {
  const auto& v = member(doc, key, path);
  const std::string where = path + "." + key;
  if (!v.is_array() || v.size() != length)
    bad(where, "expected an array of " + std::to_string(length) + " numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(where, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void expect_ids(const json& doc, const std::string& key, const std::vector<std::string>& ids) {
  const auto& v = member(doc, key, "$");
  if (v != json(ids)) bad("$." + key, "ids do not match the scenario");
}

lp::Status parse_status(const std::string& text) {
  for (auto s : {lp::Status::Optimal, lp::Status::FeasibleWithinGap, lp::Status::Infeasible,
                 lp::Status::Unbounded, lp::Status::TimeLimit})
    if (lp::to_string(s) == text) return s;
  bad("$.solver.status", "unknown status '" + text + "'");
}

ordered_json optional_by_id(const std::vector<std::string>& ids,
                            const std::optional<std::vector<double>>& values,
                            const std::string& reason) {
  return values ? by_id(ids, *values) : undefined(reason);
}

ordered_json optional_number(const std::optional<double>& v, const std::string& reason) {
  return v ? ordered_json(*v) : undefined(reason);
}

} // namespace

std::string mode_name(const DispatchOptions& options) {
  return options.anti_simultaneity == AntiSimultaneityMode::LinearBudget &&
                 options.dwell_time == DwellTimeMode::Off
             ? "lp"
             : "milp";
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json schedule_to_json(const RunReport& r) {
  const auto& s = r.scenario;
  const auto& d = r.dispatch;
  const auto& x = d.schedule;
  const auto loads = participant_ids(s);
  const auto solar = solar_ids(s);
  const auto bess = bess_ids(s);
  const std::size_t T = s.periods();

  ordered_json doc;
  doc["mode"] = r.mode;
  doc["participants"] = loads;
  doc["solar_units"] = solar;
  doc["bess_units"] = bess;
  doc["periods"] = T;
  doc["period_hours"] = s.time_grid.period_hours;

  ordered_json solver;
  solver["status"] = lp::to_string(d.status);
  solver["objective"] = d.objective;
  solver["achieved_gap"] = d.achieved_gap ? ordered_json(*d.achieved_gap) : ordered_json(nullptr);
  solver["iterations"] = d.iterations;
  solver["nodes"] = d.nodes;
  doc["solver"] = solver;

  doc["costs"]["baseline"] = costs_json(r.baseline);
  doc["costs"]["optimized"] = costs_json(d.costs);
  doc["peak"]["original_mw"] = s.original_peak();
  doc["peak"]["optimized_mw"] = x.system_peak_mw;

  ordered_json sched;
  sched["system_peak_mw"] = x.system_peak_mw;
  auto series = [&](auto get) {
    std::vector<double> v(T);
    for (std::size_t t = 0; t < T; ++t) v[t] = get(t);
    return v;
  };
  for (std::size_t i = 0; i < loads.size(); ++i)
    sched["grid_mw"][loads[i]] = series([&](std::size_t t) { return x.grid(i, t); });
  for (std::size_t i = 0; i < loads.size(); ++i) {
    for (std::size_t j = 0; j < solar.size(); ++j)
      sched["solar_fraction"][loads[i]][solar[j]] =
          series([&](std::size_t t) { return x.alpha(i, j, t); });
    for (std::size_t k = 0; k < bess.size(); ++k) {
      sched["charge_mw"][loads[i]][bess[k]] =
          series([&](std::size_t t) { return x.charge(i, k, t); });
      sched["discharge_mw"][loads[i]][bess[k]] =
          series([&](std::size_t t) { return x.discharge(i, k, t); });
    }
  }
  for (std::size_t k = 0; k < bess.size(); ++k)
    sched["soc_mwh"][bess[k]] = series([&](std::size_t t) { return x.soc(k, t); });
  doc["schedule"] = sched;
  return doc;
}

DispatchResult schedule_from_json(const json& doc, const Scenario& s) {
  const auto loads = participant_ids(s);
  const auto solar = solar_ids(s);
  const auto bess = bess_ids(s);
  const std::size_t T = s.periods();
  expect_ids(doc, "participants", loads);
  expect_ids(doc, "solar_units", solar);
  expect_ids(doc, "bess_units", bess);
  if (member(doc, "periods", "$") != json(T)) bad("$.periods", "period count does not match");

  DispatchResult out;
  out.schedule = DispatchSchedule(loads.size(), solar.size(), bess.size(), T);
  auto& x = out.schedule;
  const auto& sched = member(doc, "schedule", "$");
  x.system_peak_mw = number_at(sched, "system_peak_mw", "$.schedule");
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const auto grid = series_at(member(sched, "grid_mw", "$.schedule"), loads[i],
                                "$.schedule.grid_mw", T);
    for (std::size_t t = 0; t < T; ++t) x.grid(i, t) = grid[t];
    for (std::size_t j = 0; j < solar.size(); ++j) {
      const auto& node = member(member(sched, "solar_fraction", "$.schedule"), loads[i],
                                "$.schedule.solar_fraction");
      const auto v = series_at(node, solar[j], "$.schedule.solar_fraction." + loads[i], T);
      for (std::size_t t = 0; t < T; ++t) x.alpha(i, j, t) = v[t];
    }
    for (std::size_t k = 0; k < bess.size(); ++k) {
      const auto& c = member(member(sched, "charge_mw", "$.schedule"), loads[i],
                             "$.schedule.charge_mw");
      const auto& dch = member(member(sched, "discharge_mw", "$.schedule"), loads[i],
                               "$.schedule.discharge_mw");
      const auto cv = series_at(c, bess[k], "$.schedule.charge_mw." + loads[i], T);
      const auto dv = series_at(dch, bess[k], "$.schedule.discharge_mw." + loads[i], T);
      for (std::size_t t = 0; t < T; ++t) {
        x.charge(i, k, t) = cv[t];
        x.discharge(i, k, t) = dv[t];
      }
    }
  }
  for (std::size_t k = 0; k < bess.size(); ++k) {
    const auto v = series_at(member(sched, "soc_mwh", "$.schedule"), bess[k],
                             "$.schedule.soc_mwh", T);
    for (std::size_t t = 0; t < T; ++t) x.soc(k, t) = v[t];
  }

  const auto& solver = member(doc, "solver", "$");
  const auto& status = member(solver, "status", "$.solver");
  if (!status.is_string()) bad("$.solver.status", "expected a string");
  out.status = parse_status(status.get<std::string>());
  out.objective = number_at(solver, "objective", "$.solver");
  if (const auto& gap = member(solver, "achieved_gap", "$.solver"); gap.is_number())
    out.achieved_gap = gap.get<double>();
  out.iterations = member(solver, "iterations", "$.solver").get<std::size_t>();
  out.nodes = member(solver, "nodes", "$.solver").get<std::size_t>();

  const auto& optimized = member(member(doc, "costs", "$"), "optimized", "$.costs");
  const bool wear = member(optimized, "wear_in_total", "$.costs.optimized").get<bool>();
  out.costs = assemble_costs(x, s.tariff, s.time_grid.period_hours, wear);
  return out;
}

ordered_json allocation_to_json(const Scenario& s, const AllocationReport& a) {
  const auto loads = participant_ids(s);
  ordered_json doc;
  doc["participants"] = loads;
  doc["coalitions"] = std::size_t{1} << a.participants;
  for (auto c : kAllComponents) {
    const auto index = static_cast<std::size_t>(c);
    ordered_json node;
    node["grand_coalition_usd"] = a.component_totals[index];
    node["evaluations"] = a.evaluations[index];
    node["shapley_usd"] = by_id(loads, a.phi[index]);
    doc["components"][std::string(to_string(c))] = node;
  }
  doc["grid_cost_equal_split"] = a.grid_cost_equal_split;
  return doc;
}

AllocationReport allocation_from_json(const json& doc, const Scenario& s) {
  const auto loads = participant_ids(s);
  expect_ids(doc, "participants", loads);
  AllocationReport a;
  a.participants = loads.size();
  const auto& components = member(doc, "components", "$");
  for (auto c : kAllComponents) {
    const auto index = static_cast<std::size_t>(c);
    const std::string name(to_string(c));
    const std::string path = "$.components." + name;
    const auto& node = member(components, name, "$.components");
    a.component_totals[index] = number_at(node, "grand_coalition_usd", path);
    a.evaluations[index] = member(node, "evaluations", path).get<std::size_t>();
    const auto& shares = member(node, "shapley_usd", path);
    a.phi[index].resize(loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i)
      a.phi[index][i] = number_at(shares, loads[i], path + ".shapley_usd");
  }
  a.grid_cost_equal_split = member(doc, "grid_cost_equal_split", "$").get<bool>();
  return a;
}

ordered_json fairness_to_json(const RunReport& r) {
  if (!r.fairness || !r.standalone_costs) throw Error("report: no fairness results to write");
  const auto loads = participant_ids(r.scenario);
  const auto bess = bess_ids(r.scenario);
  const auto& f = *r.fairness;
  ordered_json doc;
  doc["participants"] = loads;
  doc["standalone_policy"] = std::string(to_string(r.standalone_policy));
  doc["standalone_cost_usd"] = by_id(loads, *r.standalone_costs);
  doc["cooperative_total_cost_usd"] = r.dispatch.costs.total_cost;
  doc["cooperative_gain_usd"] = f.cooperative_gain;
  doc["average_gain_usd"] = f.average_gain;
  doc["net_position"] =
      optional_by_id(loads, f.net_position, "benefit or cost total is not positive");
  doc["load_proportion"] = optional_by_id(loads, f.load_proportion, "total load is zero");
  doc["proportionality_deviation"] = optional_by_id(
      loads, f.proportionality_deviation, "net position or load proportion is undefined");
  doc["solar_utilization_rate"] =
      optional_number(f.synergy.solar_utilization_rate, "no solar generation");
  doc["effective_solar_utilization"] =
      optional_number(f.synergy.effective_solar_utilization, "no solar generation");
  doc["solar_utilization_note"] = kSolarNote;
  doc["bess_cycling"] = by_id(bess, f.synergy.bess_cycling);
  doc["peak_reduction_efficiency"] =
      optional_number(f.synergy.peak_reduction_efficiency, "original peak is zero");
  return doc;
}

ordered_json report_to_json(const RunReport& r) {
  const auto& s = r.scenario;
  ordered_json doc;
  ordered_json summary;
  summary["participants"] = s.participants();
  summary["solar_units"] = s.solar_units.size();
  summary["bess_units"] = s.bess_units.size();
  summary["periods"] = s.periods();
  summary["period_hours"] = s.time_grid.period_hours;
  summary["total_load_mwh"] = s.total_load_energy();
  summary["total_solar_mwh"] = s.total_solar_energy();
  summary["original_peak_mw"] = s.original_peak();
  doc["scenario"] = summary;
  doc["dispatch"] = schedule_to_json(r);
  if (r.allocation) doc["allocation"] = allocation_to_json(s, *r.allocation);
  if (r.fairness && r.standalone_costs) doc["fairness"] = fairness_to_json(r);
  return doc;
}

fs::path write_system_power(const RunReport& r, const fs::path& dir) {
  const auto& s = r.scenario;
  const auto& x = r.dispatch.schedule;
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < s.periods(); ++t) {
    double solar = 0.0;
    for (std::size_t i = 0; i < s.participants(); ++i) solar += x.solar_received(s, i, t);
    rows.push_back({static_cast<double>(t), s.total_load(t), x.total_grid(t), solar,
                    s.tariff.energy_price[t]});
  }
  const auto path = dir / "system_power.csv";
  write_csv_table(path,
                  {"period", "total_load_mw", "grid_import_mw", "solar_used_mw",
                   "price_usd_per_mwh"},
                  rows);
  return path;
}

fs::path write_battery_soc(const RunReport& r, const fs::path& dir) {
  const auto& s = r.scenario;
  const auto& x = r.dispatch.schedule;
  std::vector<std::string> header{"period"};
  for (const auto& b : s.bess_units) {
    header.push_back("soc_" + b.unit_id + "_mwh");
    header.push_back("charge_" + b.unit_id + "_mw");
    header.push_back("discharge_" + b.unit_id + "_mw");
    header.push_back("soc_min_" + b.unit_id + "_mwh");
    header.push_back("soc_max_" + b.unit_id + "_mwh");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < s.periods(); ++t) {
    std::vector<double> row{static_cast<double>(t)};
    for (std::size_t k = 0; k < s.bess_units.size(); ++k) {
      const auto& b = s.bess_units[k];
      row.push_back(x.soc(k, t));
      row.push_back(x.battery_charge(k, t));
      row.push_back(x.battery_discharge(k, t));
      row.push_back(b.soc_min * b.capacity_mwh);
      row.push_back(b.soc_max * b.capacity_mwh);
    }
    rows.push_back(std::move(row));
  }
  const auto path = dir / "battery_soc.csv";
  write_csv_table(path, header, rows);
  return path;
}

fs::path write_allocation_by_load(const RunReport& r, const fs::path& dir) {
  if (!r.allocation) throw Error("report: no allocation results to write");
  const auto& s = r.scenario;
  const auto& a = *r.allocation;
  std::string text =
      "participant,load_mwh,solar_benefit_usd,peak_savings_usd,bess_cost_usd,grid_cost_usd,"
      "net_benefit_usd\n";
  const double h = s.time_grid.period_hours;
  for (std::size_t i = 0; i < s.participants(); ++i) {
    double load = 0.0;
    for (double l : s.loads[i].demand) load += l * h;
    const double solar = a[Component::SolarBenefit][i];
    const double peak = a[Component::PeakSavings][i];
    const double wear = a[Component::BessCost][i];
    const double grid = a[Component::GridCost][i];
    text += s.loads[i].participant_id + ',' + format_number(load) + ',' + format_number(solar) +
            ',' + format_number(peak) + ',' + format_number(wear) + ',' + format_number(grid) +
            ',' + format_number(solar + peak - wear - grid) + '\n';
  }
  const auto path = dir / "allocation_by_load.csv";
  write_text(path, text);
  return path;
}

std::vector<fs::path> emit_report(const RunReport& r, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  const auto report_path = out_dir / "report.json";
  write_text(report_path, dump(report_to_json(r)));
  written.push_back(report_path);
  written.push_back(write_system_power(r, out_dir));
  written.push_back(write_battery_soc(r, out_dir));
  if (r.allocation) written.push_back(write_allocation_by_load(r, out_dir));
  return written;
}

} // namespace gridshare
