#ifndef FRONTTRACK_SCENARIO_HPP
#define FRONTTRACK_SCENARIO_HPP

#include <memory>
#include <string>

#include "fronttrack/verify.hpp"

namespace fronttrack {

struct Scenario {
  std::string name;
  std::string system_id;
  std::map<std::string, double> system_params;
  PiecewiseProfile u0;
  DatumSchedule ub;
  bool states_in_v = false;  // breakpoint values given in v-coordinates
  double eps = 1e-2;
  double r_eps = -1;      // < 0: auto (= eps)
  double omega_eps = -1;  // < 0: auto (= eps^2)
  double lambda_hat = -1; // < 0: auto
  bool calibrate_constants = true;
  FunctionalConstants constants;
  double t_end = 1.0;
  double x_max = 10.0;
  std::vector<double> snapshot_times;
  std::uint64_t seed = 1;
  double slack = 1.05;
  std::int64_t event_cap = 1000000;
  bool enforce_data_budget = false;
};

Scenario load_scenario(const std::string& path);

struct RunArtifacts {
  std::shared_ptr<SystemSpec> sys;
  BoundaryLayerModel model;
  FunctionalConstants constants;
  RunConfig cfg;
  Trajectory traj;
};

RunConfig make_run_config(const Scenario& sc, const SystemSpec& sys,
                          const FunctionalConstants& constants);

// Calibrates (when requested), runs, and verifies a scenario.
RunArtifacts run_scenario(const Scenario& sc);

// CSV + JSON outputs (17 significant digits).
void write_outputs(const std::string& out_dir, const Scenario& sc, const RunArtifacts& art);

// SVG plots generated from the CSV outputs of a previous run.
void plot_outputs(const std::string& out_dir);

std::string format_g17(double x);

}  // namespace fronttrack

#endif
