#include "gridshare/scenario_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/tokenizer.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gridshare {
namespace fs = std::filesystem;
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ValidationError({Finding{path, reason}});
}

std::string location(const fs::path& file, std::size_t line, std::size_t column) {
  return file.filename().string() + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::vector<std::string> split_row(const std::string& line, const fs::path& file,
                                   std::size_t line_no) {
  using Separator = boost::escaped_list_separator<char>;
  std::vector<std::string> cells;
  try {
    boost::tokenizer<Separator> tokens(line, Separator('\\', ',', '"'));
    for (const auto& token : tokens) cells.push_back(trim(token));
  } catch (const boost::escaped_list_error& e) {
    fail(location(file, line_no, 1), std::string("malformed CSV row: ") + e.what());
  }
  return cells;
}

// ---- config ---------------------------------------------------------------

using boost::property_tree::ptree;

class ConfigReader {
public:
  ConfigReader(const ptree& tree, fs::path base) : tree_(tree), base_(std::move(base)) {}

  RunConfig read() {
    RunConfig config;
    std::vector<std::string> bess_sections;
    for (const auto& [name, section] : tree_) {
      if (section.empty() && !section.data().empty())
        fail(name, "key outside of any section");
      if (name == "scenario") read_scenario(section, config);
      else if (name == "tariff") read_tariff(section, config);
      else if (name == "solar") read_solar(section, config);
      else if (name == "bess") continue;
      else if (name == "dispatch") read_dispatch(section, config);
      else if (name == "allocation") read_allocation(section, config);
      else if (name == "output") read_output(section, config);
      else if (name.rfind("solar.", 0) == 0) read_solar_unit(name, section, config);
      else if (name.rfind("bess.", 0) == 0) bess_sections.push_back(name.substr(5));
      else fail(name, "unknown section");
    }
    read_bess(bess_sections, config);
    return config;
  }

private:
  double number(const std::string& path, const std::string& value) {
    const auto v = parse_double(value);
    if (!v) fail(path, "expected a number, got '" + value + "'");
    return *v;
  }

  std::size_t count(const std::string& path, const std::string& value) {
    const double v = number(path, value);
    if (v < 0 || v != std::floor(v) || v > 1e9) fail(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string& path, const std::string& value) {
    std::string v = trim(value);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    fail(path, "expected true or false, got '" + value + "'");
  }

  fs::path file(const std::string& value) const {
    const fs::path p = trim(value);
    if (p.empty() || p.is_absolute()) return p;
    return base_ / p;
  }

  template <class Handler>
  void each(const std::string& section_name, const ptree& section, Handler handler) {
    for (const auto& [key, node] : section) {
      const std::string path = section_name + "." + key;
      if (!handler(key, path, node.data())) fail(path, "unknown key");
    }
  }

  void read_scenario(const ptree& section, RunConfig& c) {
    each("scenario", section, [&](const std::string& key, const std::string& path,
                                  const std::string& value) {
      if (key == "loads") c.loads_csv = file(value);
      else if (key == "solar") c.solar_csv = file(value);
      else if (key == "prices") c.prices_csv = file(value);
      else if (key == "period_hours") c.period_hours = number(path, value);
      else if (key == "balance_tolerance") c.balance_tolerance = number(path, value);
      else if (key == "ramp_limit_fraction") c.ramp_limit_fraction = number(path, value);
      else return false;
      return true;
    });
  }

  void read_tariff(const ptree& section, RunConfig& c) {
    each("tariff", section, [&](const std::string& key, const std::string& path,
                                const std::string& value) {
      if (key == "peak_charge_rate") c.peak_charge_rate = number(path, value);
      else if (key == "battery_wear_cost") c.battery_wear_cost = number(path, value);
      else if (key == "grid_fixed_cost") c.grid_fixed_cost = number(path, value);
      else return false;
      return true;
    });
  }

  void read_solar(const ptree& section, RunConfig& c) {
    each("solar", section, [&](const std::string& key, const std::string& path,
                               const std::string& value) {
      if (key != "rated_capacity_mw") return false;
      c.solar_rated_capacity = number(path, value);
      return true;
    });
  }

  void read_solar_unit(const std::string& name, const ptree& section, RunConfig& c) {
    const std::string id = name.substr(6);
    each(name, section, [&](const std::string& key, const std::string& path,
                            const std::string& value) {
      if (key != "rated_capacity_mw") return false;
      c.solar_rated_by_id[id] = number(path, value);
      return true;
    });
  }

  bool bess_field(BessSpec& spec, const std::string& key, const std::string& path,
                  const std::string& value) {
    if (key == "capacity_mwh") spec.capacity_mwh = number(path, value);
    else if (key == "power_limit_mw") spec.power_limit_mw = number(path, value);
    else if (key == "charge_eff") spec.charge_eff = number(path, value);
    else if (key == "discharge_eff") spec.discharge_eff = number(path, value);
    else if (key == "soc_min") spec.soc_min = number(path, value);
    else if (key == "soc_max") spec.soc_max = number(path, value);
    else if (key == "soc_terminal_min") spec.soc_terminal_min = number(path, value);
    else if (key == "soc_initial") spec.soc_initial = number(path, value);
    else if (key == "min_dwell_periods") {
      const std::size_t v = count(path, value);
      if (v > 1000000) fail(path, "min_dwell_periods is too large");
      spec.min_dwell_periods = static_cast<int>(v);
    } else {
      return false;
    }
    return true;
  }

  void read_bess(const std::vector<std::string>& sections, RunConfig& c) {
    BessSpec defaults;
    std::optional<std::vector<std::string>> units;
    if (const auto section = tree_.get_child_optional("bess")) {
      each("bess", *section, [&](const std::string& key, const std::string& path,
                                 const std::string& value) {
        if (key == "units") {
          units.emplace();
          std::stringstream list(value);
          std::string id;
          while (std::getline(list, id, ',')) {
            id = trim(id);
            if (id.empty()) continue;
            if (std::find(units->begin(), units->end(), id) != units->end())
              fail(path, "duplicate battery id '" + id + "'");
            units->push_back(id);
          }
          return true;
        }
        return bess_field(defaults, key, path, value);
      });
    }
    if (!units) {
      if (sections.empty())
        units = std::vector<std::string>{"BESS1", "BESS2"};
      else
        units = sections;
    }
    c.bess_units.clear();
    for (const auto& id : *units) {
      BessSpec spec = defaults;
      spec.unit_id = id;
      c.bess_units.push_back(spec);
    }
    for (const auto& id : sections) {
      const auto it = std::find_if(c.bess_units.begin(), c.bess_units.end(),
                                   [&](const BessSpec& b) { return b.unit_id == id; });
      const std::string name = "bess." + id;
      if (it == c.bess_units.end()) fail(name, "battery '" + id + "' is not listed in bess.units");
      for (const auto& [key, node] : tree_) {
        if (key != name) continue;
        each(name, node, [&](const std::string& k, const std::string& path,
                             const std::string& value) { return bess_field(*it, k, path, value); });
      }
    }
  }

  void read_dispatch(const ptree& section, RunConfig& c) {
    each("dispatch", section, [&](const std::string& key, const std::string& path,
                                  const std::string& value) {
      auto& o = c.dispatch;
      if (key == "mode") {
        const std::string mode = trim(value);
        const auto solve = o.solve_options;
        const bool wear = o.include_wear_in_objective;
        if (mode == "lp") o = DispatchOptions{};
        else if (mode == "milp") o = DispatchOptions::binary_modes();
        else fail(path, "expected lp or milp, got '" + value + "'");
        o.solve_options = solve;
        o.include_wear_in_objective = wear;
      } else if (key == "time_limit") {
        o.solve_options.time_limit_seconds = number(path, value);
      } else if (key == "gap") {
        o.solve_options.gap_tolerance = number(path, value);
      } else if (key == "feasibility_tolerance") {
        o.solve_options.feasibility_tolerance = number(path, value);
      } else if (key == "include_wear") {
        o.include_wear_in_objective = flag(path, value);
      } else {
        return false;
      }
      return true;
    });
  }

  void read_allocation(const ptree& section, RunConfig& c) {
    each("allocation", section, [&](const std::string& key, const std::string& path,
                                    const std::string& value) {
      if (key == "standalone") {
        const std::string v = trim(value);
        if (v == "grid-only") c.standalone = StandalonePolicy::GridOnly;
        else if (v == "proportional") c.standalone = StandalonePolicy::ProportionalAssets;
        else fail(path, "expected grid-only or proportional, got '" + value + "'");
      } else if (key == "parallel") {
        c.parallelism = count(path, value);
      } else {
        return false;
      }
      return true;
    });
  }

  void read_output(const ptree& section, RunConfig& c) {
    each("output", section, [&](const std::string& key, const std::string&,
                                const std::string& value) {
      if (key != "dir") return false;
      c.output_dir = file(value);
      return true;
    });
  }

  const ptree& tree_;
  fs::path base_;
};

std::vector<std::string> join_header(const std::vector<std::string>& names) {
  std::vector<std::string> header{"period"};
  header.insert(header.end(), names.begin(), names.end());
  return header;
}

} // namespace

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw Error("format_number: conversion failed");
  return std::string(buffer, ptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return text.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

CsvTable read_csv_table(const fs::path& path) {
  std::istringstream in(read_text(path));
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line, path, line_no);
    if (!have_header) {
      have_header = true;
      if (cells.empty() || cells[0] != "period")
        fail(location(path, line_no, 1), "first column must be 'period'");
      std::set<std::string> seen;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].empty()) fail(location(path, line_no, c + 1), "empty column name");
        if (!seen.insert(cells[c]).second)
          fail(location(path, line_no, c + 1), "duplicate column '" + cells[c] + "'");
        table.names.push_back(cells[c]);
      }
      table.columns.resize(table.names.size());
      continue;
    }
    if (cells.size() != table.names.size() + 1)
      fail(location(path, line_no, std::min(cells.size(), table.names.size() + 1) + 1),
           "expected " + std::to_string(table.names.size() + 1) + " cells, got " +
               std::to_string(cells.size()));
    const auto period = parse_double(cells[0]);
    if (!period) fail(location(path, line_no, 1), "non-numeric cell '" + cells[0] + "'");
    if (*period != static_cast<double>(table.rows))
      fail(location(path, line_no, 1), "period index " + cells[0] + " out of sequence, expected " +
                                           std::to_string(table.rows));
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) fail(location(path, line_no, c + 1), "non-numeric cell '" + cells[c] + "'");
      table.columns[c - 1].push_back(*v);
    }
    ++table.rows;
  }
  return table;
}

void write_csv_table(const fs::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) text += ',';
    text += header[c];
  }
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) text += ',';
      text += c == 0 ? std::to_string(static_cast<long long>(row[c])) : format_number(row[c]);
    }
    text += '\n';
  }
  write_text(path, text);
}

RunConfig load_config(const fs::path& path) {
  ptree tree;
  {
    std::istringstream in(read_text(path));
    try {
      boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      fail(path.filename().string() + ":" + std::to_string(e.line()), e.message());
    }
  }
  ConfigReader reader(tree, path.parent_path());
  return reader.read();
}

Scenario load_scenario(const RunConfig& config) {
  if (config.loads_csv.empty()) fail("scenario.loads", "no load table configured");
  if (config.prices_csv.empty()) fail("scenario.prices", "no price table configured");

  const auto loads = read_csv_table(config.loads_csv);
  const auto prices = read_csv_table(config.prices_csv);
  if (prices.names.empty())
    fail(location(config.prices_csv, 1, 2), "missing column: expected one price column");
  if (prices.names.size() > 1)
    fail(location(config.prices_csv, 1, 3), "expected exactly one price column");

  Scenario s;
  s.time_grid.period_count = loads.names.empty() ? prices.rows : loads.rows;
  s.time_grid.period_hours = config.period_hours;
  s.balance_tolerance = config.balance_tolerance;
  s.ramp_limit_fraction = config.ramp_limit_fraction;
  for (std::size_t i = 0; i < loads.names.size(); ++i)
    s.loads.push_back({loads.names[i], loads.columns[i]});
  s.tariff.energy_price = prices.columns[0];
  s.tariff.peak_charge_rate = config.peak_charge_rate;
  s.tariff.battery_wear_cost = config.battery_wear_cost;
  s.tariff.grid_fixed_cost = config.grid_fixed_cost;

  if (!config.solar_csv.empty()) {
    const auto solar = read_csv_table(config.solar_csv);
    for (std::size_t j = 0; j < solar.names.size(); ++j) {
      SolarUnit unit{solar.names[j], solar.columns[j], config.solar_rated_capacity};
      if (const auto it = config.solar_rated_by_id.find(unit.unit_id);
          it != config.solar_rated_by_id.end())
        unit.rated_capacity = it->second;
      s.solar_units.push_back(std::move(unit));
    }
  }
  for (const auto& [id, rating] : config.solar_rated_by_id) {
    (void)rating;
    if (std::none_of(s.solar_units.begin(), s.solar_units.end(),
                     [&](const SolarUnit& u) { return u.unit_id == id; }))
      fail("solar." + id, "no solar column named '" + id + "'");
  }
  s.bess_units = config.bess_units;
  require_valid(s);
  return s;
}

void write_scenario(const Scenario& s, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::size_t T = s.periods();

  auto table = [&](const auto& names, auto value_of) {
    std::vector<std::vector<double>> rows(T);
    for (std::size_t t = 0; t < T; ++t) {
      rows[t].push_back(static_cast<double>(t));
      for (std::size_t c = 0; c < names.size(); ++c) rows[t].push_back(value_of(c, t));
    }
    return rows;
  };

  std::vector<std::string> load_ids, solar_ids;
  for (const auto& l : s.loads) load_ids.push_back(l.participant_id);
  for (const auto& u : s.solar_units) solar_ids.push_back(u.unit_id);
  write_csv_table(dir / "loads.csv", join_header(load_ids),
                  table(load_ids, [&](std::size_t i, std::size_t t) { return s.loads[i].demand[t]; }));
  write_csv_table(dir / "solar.csv", join_header(solar_ids),
                  table(solar_ids, [&](std::size_t j, std::size_t t) {
                    return s.solar_units[j].generation[t];
                  }));
  const std::vector<std::string> price_name{"price_usd_per_mwh"};
  write_csv_table(dir / "prices.csv", join_header(price_name),
                  table(price_name, [&](std::size_t, std::size_t t) {
                    return s.tariff.energy_price[t];
                  }));

  std::ostringstream ini;
  ini << "[scenario]\n"
      << "loads = loads.csv\n"
      << "solar = solar.csv\n"
      << "prices = prices.csv\n"
      << "period_hours = " << format_number(s.time_grid.period_hours) << '\n'
      << "balance_tolerance = " << format_number(s.balance_tolerance) << '\n'
      << "ramp_limit_fraction = " << format_number(s.ramp_limit_fraction) << "\n\n"
      << "[tariff]\n"
      << "peak_charge_rate = " << format_number(s.tariff.peak_charge_rate) << '\n'
      << "battery_wear_cost = " << format_number(s.tariff.battery_wear_cost) << '\n'
      << "grid_fixed_cost = " << format_number(s.tariff.grid_fixed_cost) << '\n';
  for (const auto& u : s.solar_units)
    ini << "\n[solar." << u.unit_id << "]\nrated_capacity_mw = " << format_number(u.rated_capacity)
        << '\n';
  ini << "\n[bess]\nunits =";
  for (std::size_t k = 0; k < s.bess_units.size(); ++k)
    ini << (k ? ", " : " ") << s.bess_units[k].unit_id;
  ini << '\n';
  for (const auto& b : s.bess_units) {
    ini << "\n[bess." << b.unit_id << "]\n"
        << "capacity_mwh = " << format_number(b.capacity_mwh) << '\n'
        << "power_limit_mw = " << format_number(b.power_limit_mw) << '\n'
        << "charge_eff = " << format_number(b.charge_eff) << '\n'
        << "discharge_eff = " << format_number(b.discharge_eff) << '\n'
        << "soc_min = " << format_number(b.soc_min) << '\n'
        << "soc_max = " << format_number(b.soc_max) << '\n'
        << "soc_terminal_min = " << format_number(b.soc_terminal_min) << '\n'
        << "soc_initial = " << format_number(b.soc_initial) << '\n'
        << "min_dwell_periods = " << b.min_dwell_periods << '\n';
  }
  write_text(dir / "config.ini", ini.str());
}

} // namespace gridshare
