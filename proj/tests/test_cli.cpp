#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fronttrack/scenario.hpp"

using namespace fronttrack;
namespace fs = std::filesystem;

namespace {

std::string write_temp_scenario(const std::string& body, const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "fronttrack_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

const char* kBurgersScenario = R"json({
  "name": "burgers-mini",
  "system": {"id": "burgers"},
  "u0": {"values": [[0.02]]},
  "ub": {"breakpoints": [0.2], "values": [[0.02], [-0.02]]},
  "eps": {"eps": 0.01},
  "constants": {"A": 4, "K1": 6, "K2": 4, "K3": 4, "K4": 4, "delta": 0.5},
  "T_end": 1.0, "X_max": 3.0,
  "snapshot_times": [0.5, 1.0],
  "seed": 42
})json";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scenario loading") {
  std::string p = write_temp_scenario(kBurgersScenario, "mini.json");
  Scenario sc = load_scenario(p);
  CHECK(sc.system_id == "burgers");
  CHECK(sc.seed == 42);
  CHECK_FALSE(sc.calibrate_constants);
  CHECK(sc.ub.times.size() == 2);
  CHECK(sc.eps == doctest::Approx(0.01));
}

TEST_CASE("malformed scenarios are rejected") {
  SUBCASE("unsorted breakpoints") {
    std::string bad = R"json({
      "name": "bad", "system": {"id": "burgers"},
      "u0": {"breakpoints": [0.5, 0.2], "values": [[0.0],[0.01],[0.02]]},
      "ub": {"values": [[0.0]]}, "seed": 1
    })json";
    std::string p = write_temp_scenario(bad, "bad1.json");
    CHECK_THROWS_AS(load_scenario(p), FtError);
  }
  SUBCASE("missing seed") {
    std::string bad = R"json({
      "name": "bad", "system": {"id": "burgers"},
      "u0": {"values": [[0.0]]}, "ub": {"values": [[0.0]]}
    })json";
    std::string p = write_temp_scenario(bad, "bad2.json");
    CHECK_THROWS_AS(load_scenario(p), FtError);
  }
  SUBCASE("state outside the working box") {
    std::string bad = R"json({
      "name": "bad", "system": {"id": "burgers"},
      "u0": {"values": [[2.5]]}, "ub": {"values": [[0.0]]}, "seed": 1
    })json";
    std::string p = write_temp_scenario(bad, "bad3.json");
    Scenario sc = load_scenario(p);
    auto sys = make_system(sc.system_id, sc.system_params);
    CHECK_THROWS_AS(make_run_config(sc, *sys, sc.constants), FtError);
  }
}

TEST_CASE("outputs are byte-identical for identical scenario and seed") {
  std::string p = write_temp_scenario(kBurgersScenario, "mini2.json");
  Scenario sc = load_scenario(p);
  fs::path dir1 = fs::temp_directory_path() / "fronttrack_test" / "out1";
  fs::path dir2 = fs::temp_directory_path() / "fronttrack_test" / "out2";
  RunArtifacts a1 = run_scenario(sc);
  RunArtifacts a2 = run_scenario(sc);
  write_outputs(dir1.string(), sc, a1);
  write_outputs(dir2.string(), sc, a2);
  for (const char* f : {"fronts.csv", "snapshots.csv", "functionals.csv", "trace.csv",
                        "summary.json", "xt.csv"})
    CHECK(slurp((dir1 / f).string()) == slurp((dir2 / f).string()));
}

TEST_CASE("plots are emitted from the CSV outputs") {
  std::string p = write_temp_scenario(kBurgersScenario, "mini3.json");
  Scenario sc = load_scenario(p);
  fs::path dir = fs::temp_directory_path() / "fronttrack_test" / "plots";
  RunArtifacts art = run_scenario(sc);
  write_outputs(dir.string(), sc, art);
  plot_outputs(dir.string());
  for (const char* f : {"xt.svg", "functionals.svg", "profile.svg"}) {
    std::string svg = slurp((dir / f).string());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("cli binary end to end") {
  const char* cli = std::getenv("FRONTTRACK_CLI");
  if (!cli) return;  // only run when ctest provides the binary path
  std::string p = write_temp_scenario(kBurgersScenario, "mini4.json");
  fs::path out = fs::temp_directory_path() / "fronttrack_test" / "cli_out";
  std::string cmd = std::string(cli) + " run --scenario " + p + " --out " + out.string() +
                    " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "summary.json"));
  std::string bad = write_temp_scenario("{ not json", "bad_cli.json");
  std::string cmd2 = std::string(cli) + " run --scenario " + bad + " > /dev/null 2>&1";
  CHECK(std::system(cmd2.c_str()) != 0);
  std::string cmd3 = std::string(cli) + " riemann burgers 1,0e0 0 > /dev/null 2>&1";
  (void)cmd3;
}
