#include "gridshare/cli.hpp"

#include "gridshare/allocation.hpp"
#include "gridshare/dispatch.hpp"
#include "gridshare/fairness.hpp"
#include "gridshare/report.hpp"
#include "gridshare/scenario_io.hpp"
#include "gridshare/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>

namespace gridshare::cli {
namespace {
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::size_t> parallel;
  std::optional<std::string> mode;
  std::optional<double> time_limit;
  std::optional<double> gap;
  std::optional<std::string> standalone;
  std::string dump_lp;

  std::uint64_t seed = 1;
  std::string profile = "weekday";
  std::size_t participants = 10;
  std::size_t solar = 2;
  std::size_t batteries = 2;
  std::size_t periods = 24;
};

/// Config merged with command-line overrides.
struct Setup {
  RunConfig config;
  Scenario scenario;
  fs::path out_dir;
};

fs::path output_dir(const Flags& flags, const RunConfig* config) {
  if (!flags.out.empty()) return flags.out;
  if (config && !config->output_dir.empty()) return config->output_dir;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return ".";
}

void apply_overrides(const Flags& flags, RunConfig& config) {
  auto& dispatch = config.dispatch;
  if (flags.mode) {
    const auto solve = dispatch.solve_options;
    const bool wear = dispatch.include_wear_in_objective;
    dispatch = *flags.mode == "milp" ? DispatchOptions::binary_modes() : DispatchOptions{};
    dispatch.solve_options = solve;
    dispatch.include_wear_in_objective = wear;
  }
  if (flags.time_limit) dispatch.solve_options.time_limit_seconds = *flags.time_limit;
  if (flags.gap) dispatch.solve_options.gap_tolerance = *flags.gap;
  if (flags.parallel) config.parallelism = *flags.parallel;
  if (flags.standalone)
    config.standalone = *flags.standalone == "proportional" ? StandalonePolicy::ProportionalAssets
                                                            : StandalonePolicy::GridOnly;
}

Setup prepare(const Flags& flags) {
  Setup setup;
  setup.config = load_config(flags.config);
  apply_overrides(flags, setup.config);
  setup.scenario = load_scenario(setup.config);
  setup.out_dir = output_dir(flags, &setup.config);
  std::error_code ec;
  fs::create_directories(setup.out_dir, ec);
  if (ec) throw IoError("cannot create " + setup.out_dir.string() + ": " + ec.message());
  return setup;
}

std::string money(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

RunReport optimize(const Setup& setup, const Flags& flags, std::ostream& out) {
  const auto& options = setup.config.dispatch;
  if (!flags.dump_lp.empty()) {
    const auto model = build_model(setup.scenario, options);
    write_text(flags.dump_lp, lp::to_lp_format(model.problem));
    out << "wrote " << flags.dump_lp << '\n';
  }
  RunReport report;
  report.scenario = setup.scenario;
  report.mode = mode_name(options);
  report.dispatch = optimize_dispatch(setup.scenario, options);
  report.baseline = baseline_costs(setup.scenario);
  const auto& d = report.dispatch;
  out << "dispatch " << report.mode << ": " << lp::to_string(d.status) << " in "
      << std::setprecision(3) << d.solve_seconds << " s (" << d.iterations << " iterations, "
      << d.nodes << " nodes)\n"
      << "  energy cost  " << money(report.baseline.energy_cost) << " -> "
      << money(d.costs.energy_cost) << " USD\n"
      << "  peak charge  " << money(report.baseline.peak_charge) << " -> "
      << money(d.costs.peak_charge) << " USD\n"
      << "  total cost   " << money(report.baseline.total_cost) << " -> "
      << money(d.costs.total_cost) << " USD\n";
  return report;
}

void write_schedule(const RunReport& report, const fs::path& dir, std::ostream& out) {
  write_text(dir / "schedule.json", dump(schedule_to_json(report)));
  write_system_power(report, dir);
  write_battery_soc(report, dir);
  out << "wrote schedule.json, system_power.csv, battery_soc.csv to " << dir.string() << '\n';
}

RunReport load_schedule(const Setup& setup) {
  const auto path = setup.out_dir / "schedule.json";
  if (!fs::exists(path))
    throw IoError("no schedule at " + path.string() + "; run `optimize` first");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({Finding{path.string(), std::string("invalid JSON: ") + e.what()}});
  }
  RunReport report;
  report.scenario = setup.scenario;
  report.dispatch = schedule_from_json(doc, setup.scenario);
  report.baseline = baseline_costs(setup.scenario);
  if (doc.contains("mode") && doc["mode"].is_string()) report.mode = doc["mode"].get<std::string>();
  return report;
}

void run_allocation(RunReport& report, const Setup& setup, std::ostream& out) {
  report.allocation = allocate(report.dispatch.schedule, setup.scenario, setup.config.parallelism);
  const auto& a = *report.allocation;
  out << "allocation over " << a.evaluations[0] << " coalitions per component\n";
  for (auto c : kAllComponents)
    out << "  " << std::left << std::setw(14) << to_string(c) << money(a.total(c)) << " USD\n";
  if (a.grid_cost_equal_split) out << "  grid cost split equally: no grid energy imported\n";
}

void write_allocation(const RunReport& report, const fs::path& dir, std::ostream& out) {
  write_text(dir / "allocation.json", dump(allocation_to_json(report.scenario, *report.allocation)));
  write_allocation_by_load(report, dir);
  out << "wrote allocation.json, allocation_by_load.csv to " << dir.string() << '\n';
}

void load_allocation(RunReport& report, const Setup& setup) {
  const auto path = setup.out_dir / "allocation.json";
  if (!fs::exists(path))
    throw IoError("no allocation at " + path.string() + "; run `allocate` first");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({Finding{path.string(), std::string("invalid JSON: ") + e.what()}});
  }
  report.allocation = allocation_from_json(doc, setup.scenario);
}

void run_fairness(RunReport& report, const Setup& setup, std::ostream& out) {
  report.standalone_policy = setup.config.standalone;
  report.standalone_costs =
      standalone_costs(setup.scenario, setup.config.standalone, setup.config.dispatch);
  report.fairness = analyze_fairness(report.dispatch.schedule, setup.scenario, *report.allocation,
                                     *report.standalone_costs, report.dispatch.costs.total_cost);
  const auto& f = *report.fairness;
  out << "cooperative gain " << money(f.cooperative_gain) << " USD (" << money(f.average_gain)
      << " per participant, " << to_string(report.standalone_policy) << " standalone)\n";
  if (f.synergy.peak_reduction_efficiency)
    out << "  peak reduction " << std::setprecision(4) << *f.synergy.peak_reduction_efficiency * 100
        << " %\n";
}

void write_fairness(const RunReport& report, const fs::path& dir, std::ostream& out) {
  write_text(dir / "fairness.json", dump(fairness_to_json(report)));
  out << "wrote fairness.json to " << dir.string() << '\n';
}

int generate(const Flags& flags, std::ostream& out) {
  Profile profile;
  try {
    profile = parse_profile(flags.profile);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--profile", e.what());
  }
  const ScenarioShape shape{flags.participants, flags.solar, flags.batteries, flags.periods};
  const auto scenario = generate_synthetic(flags.seed, shape, profile);
  const auto dir = output_dir(flags, nullptr);
  write_scenario(scenario, dir);
  out << "wrote " << to_string(profile) << " scenario (seed " << flags.seed << ", N="
      << shape.participants << ") to " << dir.string() << '\n';
  return kOk;
}

int dispatch_verb(const std::string& verb, const Flags& flags, std::ostream& out) {
  if (verb == "generate") return generate(flags, out);
  const Setup setup = prepare(flags);
  if (verb == "optimize") {
    write_schedule(optimize(setup, flags, out), setup.out_dir, out);
  } else if (verb == "allocate") {
    auto report = load_schedule(setup);
    run_allocation(report, setup, out);
    write_allocation(report, setup.out_dir, out);
  } else if (verb == "fairness") {
    auto report = load_schedule(setup);
    load_allocation(report, setup);
    run_fairness(report, setup, out);
    write_fairness(report, setup.out_dir, out);
  } else {
    // Fail before a long solve when allocation cannot follow it.
    check_enumeration_cap(setup.scenario.participants());
    auto report = optimize(setup, flags, out);
    write_schedule(report, setup.out_dir, out);
    run_allocation(report, setup, out);
    write_allocation(report, setup.out_dir, out);
    run_fairness(report, setup, out);
    write_fairness(report, setup.out_dir, out);
    emit_report(report, setup.out_dir);
    out << "wrote report.json to " << setup.out_dir.string() << '\n';
  }
  return kOk;
}

void add_config(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Scenario config file (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output directory");
}

void add_dispatch(CLI::App* cmd, Flags& f) {
  cmd->add_option("--mode", f.mode, "lp: linear power budget; milp: binary modes with dwell")
      ->check(CLI::IsMember({"lp", "milp"}));
  cmd->add_option("--time-limit", f.time_limit, "Solver time limit in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap", f.gap, "Relative optimality gap for milp")
      ->check(CLI::NonNegativeNumber);
}

void add_parallel(CLI::App* cmd, Flags& f) {
  cmd->add_option("--parallel", f.parallel, "Coalition evaluation workers (0: all cores)");
}

void add_standalone(CLI::App* cmd, Flags& f) {
  cmd->add_option("--standalone", f.standalone, "Standalone cost policy")
      ->check(CLI::IsMember({"grid-only", "proportional"}));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community microgrid dispatch and fair cost allocation", "gridshare"};
  app.require_subcommand(1);
  Flags flags;

  auto* optimize_cmd = app.add_subcommand("optimize", "Optimize the dispatch schedule");
  add_config(optimize_cmd, flags);
  add_dispatch(optimize_cmd, flags);
  optimize_cmd->add_option("--dump-lp", flags.dump_lp, "Also write the model in LP format");

  auto* allocate_cmd = app.add_subcommand("allocate", "Shapley allocation of a saved schedule");
  add_config(allocate_cmd, flags);
  add_parallel(allocate_cmd, flags);

  auto* fairness_cmd = app.add_subcommand("fairness", "Fairness and synergy metrics");
  add_config(fairness_cmd, flags);
  add_standalone(fairness_cmd, flags);
  add_dispatch(fairness_cmd, flags);

  auto* all_cmd = app.add_subcommand("run-all", "optimize, allocate, fairness and report");
  add_config(all_cmd, flags);
  add_dispatch(all_cmd, flags);
  add_parallel(all_cmd, flags);
  add_standalone(all_cmd, flags);
  all_cmd->add_option("--dump-lp", flags.dump_lp, "Also write the model in LP format");

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic scenario");
  generate_cmd->add_option("--out", flags.out, "Output directory");
  generate_cmd->add_option("--seed", flags.seed, "Random seed");
  generate_cmd->add_option("--profile", flags.profile,
                           "peak-day, low-day, high-price, high-solar, weekday or weekend");
  generate_cmd->add_option("--participants", flags.participants, "Number of loads")
      ->check(CLI::Range(1, 30));
  generate_cmd->add_option("--solar", flags.solar, "Number of solar units");
  generate_cmd->add_option("--batteries", flags.batteries, "Number of batteries");
  generate_cmd->add_option("--periods", flags.periods, "Periods per day")
      ->check(CLI::Range(1, 1440));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return dispatch_verb(verb, flags, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n  violated constraint: " << e.row_name() << '\n';
    return kInfeasible;
  } catch (const TimeLimitError& e) {
    err << "time limit: " << e.what() << '\n';
    return kTimeLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

} // namespace gridshare::cli
