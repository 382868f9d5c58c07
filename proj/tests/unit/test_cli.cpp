#include "gridshare/cli.hpp"
#include "gridshare/scenario_io.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace gridshare;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  fs::path root;
  Workspace() {
    static int counter = 0;
    root = fs::temp_directory_path() /
           ("gridshare_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
  std::string operator/(const std::string& name) const { return (root / name).string(); }
};

std::string scenario_in(const Workspace& ws, const std::string& seed = "3",
                        const std::string& participants = "6") {
  const auto dir = ws / "scenario";
  const auto r = invoke({"generate", "--out", dir, "--seed", seed, "--profile", "weekday",
                      "--participants", participants});
  REQUIRE(r.code == 0);
  return dir + "/config.ini";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("run-all writes the full report") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  const auto r = invoke({"run-all", "--config", cfg, "--out", ws / "out"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"schedule.json", "allocation.json", "fairness.json", "report.json",
                        "system_power.csv", "battery_soc.csv", "allocation_by_load.csv"})
    CHECK(fs::exists(ws.root / "out" / f));
  const auto doc = nlohmann::json::parse(read_text(ws.root / "out" / "report.json"));
  const auto& components = doc["allocation"]["components"];
  for (const char* c : {"solar_benefit", "bess_cost", "peak_savings", "grid_cost"})
    CHECK(components.contains(c));
  CHECK(doc["fairness"].contains("net_position"));
}

TEST_CASE("optimize alone writes no allocation files") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  const auto r = invoke({"optimize", "--config", cfg, "--out", ws / "out", "--dump-lp",
                      ws / "out/model.lp"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(ws.root / "out/schedule.json"));
  CHECK(fs::exists(ws.root / "out/model.lp"));
  CHECK_FALSE(fs::exists(ws.root / "out/allocation.json"));
  CHECK_FALSE(fs::exists(ws.root / "out/allocation_by_load.csv"));
  CHECK_FALSE(fs::exists(ws.root / "out/report.json"));
}

TEST_CASE("phases chain through the output directory") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  const auto out = ws / "out";
  CHECK(invoke({"allocate", "--config", cfg, "--out", out}).code != 0);
  REQUIRE(invoke({"optimize", "--config", cfg, "--out", out}).code == 0);
  REQUIRE(invoke({"allocate", "--config", cfg, "--out", out, "--parallel", "1"}).code == 0);
  const auto one = read_text(ws.root / "out/allocation.json");
  REQUIRE(invoke({"allocate", "--config", cfg, "--out", out, "--parallel", "8"}).code == 0);
  CHECK(read_text(ws.root / "out/allocation.json") == one);
  CHECK(invoke({"fairness", "--config", cfg, "--out", out}).code == 0);
  CHECK(fs::exists(ws.root / "out/fairness.json"));
}

TEST_CASE("repeated runs produce identical bytes") {
  Workspace ws;
  const auto cfg = scenario_in(ws, "9");
  REQUIRE(invoke({"run-all", "--config", cfg, "--out", ws / "a", "--parallel", "1"}).code == 0);
  REQUIRE(invoke({"run-all", "--config", cfg, "--out", ws / "b", "--parallel", "4"}).code == 0);
  for (const char* f : {"report.json", "schedule.json", "allocation_by_load.csv"})
    CHECK(read_text(ws.root / "a" / f) == read_text(ws.root / "b" / f));
  REQUIRE(invoke({"run-all", "--config", cfg, "--out", ws / "a"}).code == 0);
  CHECK(read_text(ws.root / "a/report.json") == read_text(ws.root / "b/report.json"));
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"optimise"}).code == cli::kUsage);
  CHECK(invoke({"optimize"}).code == cli::kUsage);
  CHECK(invoke({"optimize", "--config", "/no/such/file.ini"}).code == cli::kUsage);
  Workspace ws;
  const auto cfg = scenario_in(ws);
  CHECK(invoke({"optimize", "--config", cfg, "--mode", "fast"}).code == cli::kUsage);
  CHECK(invoke({"optimize", "--config", cfg, "--bogus"}).code == cli::kUsage);
  CHECK(invoke({"generate", "--profile", "monday", "--out", ws / "g"}).code == cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("validation failures exit with their own code") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  auto prices = read_text(ws.root / "scenario/prices.csv");
  const auto pos = prices.find("\n3,");
  REQUIRE(pos != std::string::npos);
  prices.insert(pos + 3, "-");
  write_text(ws.root / "scenario/prices.csv", prices);
  const auto r = invoke({"optimize", "--config", cfg, "--out", ws / "out"});
  CHECK(r.code == cli::kValidation);
  CHECK(r.err.find("tariff.energy_price[3]") != std::string::npos);
}

TEST_CASE("infeasible models name the violated row") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  write_text(cfg,
             "[scenario]\nloads = loads.csv\nsolar = solar.csv\nprices = prices.csv\n"
             "[bess.BESS1]\nsoc_initial = 0.15\nsoc_terminal_min = 0.95\npower_limit_mw = 0.01\n");
  const auto r = invoke({"optimize", "--config", cfg, "--out", ws / "out"});
  CHECK(r.code == cli::kInfeasible);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("time limit without a schedule") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  const auto r = invoke({"optimize", "--config", cfg, "--out", ws / "out", "--mode", "milp",
                      "--time-limit", "1e-9"});
  CHECK(r.code == cli::kTimeLimit);
}

TEST_CASE("oversized coalitions are refused") {
  Workspace ws;
  const auto cfg = scenario_in(ws, "1", "21");
  const auto r = invoke({"run-all", "--config", cfg, "--out", ws / "out"});
  CHECK(r.code == cli::kFailure);
  CHECK(r.err.find("21") != std::string::npos);
}

TEST_CASE("output directory from the environment") {
  Workspace ws;
  const auto cfg = scenario_in(ws);
  ::setenv(cli::kOutputEnv, (ws / "env").c_str(), 1);
  const auto r = invoke({"optimize", "--config", cfg});
  ::unsetenv(cli::kOutputEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(ws.root / "env/schedule.json"));
}

TEST_CASE("the installed binary reports its exit status") {
  const std::string bin = GRIDSHARE_CLI_PATH;
  CHECK(std::system((bin + " > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((bin + " --help > /dev/null 2>&1").c_str()) == 0);
}

}
