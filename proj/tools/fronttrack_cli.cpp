// Command-line driver: scenario runs, epsilon sweeps, interaction-estimate
// measurement, calibration, one-shot Riemann solves and SVG plots.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "fronttrack/scenario.hpp"

using namespace fronttrack;
using nlohmann::json;

namespace {

int cmd_run(const std::string& scenario_file, const std::string& out_dir, double slack_override,
            std::int64_t cap_override, std::uint64_t seed_override, bool have_seed) {
  Scenario sc = load_scenario(scenario_file);
  if (slack_override > 0) sc.slack = slack_override;
  if (cap_override > 0) sc.event_cap = cap_override;
  if (have_seed) sc.seed = seed_override;
  RunArtifacts art = run_scenario(sc);
  if (!out_dir.empty()) write_outputs(out_dir, sc, art);
  std::cout << "scenario " << sc.name << ": " << art.traj.events.size() << " events, sup TV "
            << format_g17(art.traj.sup_tv) << ", Upsilon(0) " << format_g17(art.traj.upsilon0)
            << '\n';
  if (!art.traj.all_pass) {
    for (const Verdict& v : art.traj.events)
      if (!v.pass || !v.lambda_pass)
        std::cerr << "FAILED verdict at t = " << v.event.t << " (" << to_string(v.event.kind)
                  << "): dUpsilon = " << v.delta_upsilon << " bound " << v.bound << '\n';
    for (const Violation& v : art.traj.violations)
      std::cerr << "VIOLATION at t = " << v.t << ": " << v.what << '\n';
    return 1;
  }
  std::cout << "all decrease verdicts pass\n";
  return 0;
}

int cmd_sweep(const std::string& scenario_file, const std::string& out_dir,
              std::vector<double> eps_list) {
  Scenario sc = load_scenario(scenario_file);
  RunArtifacts base = run_scenario(sc);  // calibrates once
  if (eps_list.empty()) eps_list = {4e-2, 2e-2, 1e-2, 5e-3};
  std::sort(eps_list.rbegin(), eps_list.rend());
  auto rows = convergence_study(*base.sys, base.model, base.cfg, eps_list);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/sweep.csv");
    out << "# fronttrack sweep v1\n";
    out << "eps,l1_to_next,l1_to_exact,sup_tv,flux_trace_tv,events,max_raref,np_total\n";
    for (const auto& r : rows)
      out << format_g17(r.eps) << ',' << format_g17(r.l1_to_next) << ','
          << format_g17(r.l1_to_exact) << ',' << format_g17(r.sup_tv) << ','
          << format_g17(r.flux_trace_tv) << ',' << r.event_count << ','
          << format_g17(r.max_raref) << ',' << format_g17(r.np_total) << '\n';
  }
  for (const auto& r : rows)
    std::cout << "eps " << r.eps << ": events " << r.event_count << " supTV " << r.sup_tv
              << " L1next " << r.l1_to_next << " fluxTV " << r.flux_trace_tv << '\n';
  return 0;
}

int cmd_estimates(const std::string& scenario_file, const std::string& out_dir, int samples,
                  std::uint64_t seed) {
  Scenario sc = load_scenario(scenario_file);
  auto sys = make_system(sc.system_id, sc.system_params);
  BoundaryLayerModel model = make_boundary_model(*sys);
  SweepSpec sw;
  sw.samples = samples;
  sw.seed = seed;
  json out_json = json::array();
  for (EstimateId id : {EstimateId::nc, EstimateId::me, EstimateId::melindeg,
                        EstimateId::rarepiccola, EstimateId::pallido2, EstimateId::iebressan}) {
    EstimateReport rep = measure_estimate(*sys, model, id, sw);
    std::cout << to_string(id) << ": applicable " << rep.applicable << "/" << rep.sample_count
              << " sup ratio " << rep.sup_ratio << " tail " << rep.tail_ratio << " zero-rhs lhs "
              << rep.sup_lhs_zero_rhs << " failures " << rep.failures << '\n';
    out_json.push_back({{"estimate", to_string(id)},
                        {"samples", rep.sample_count},
                        {"applicable", rep.applicable},
                        {"sup_ratio", rep.sup_ratio},
                        {"tail_ratio", rep.tail_ratio},
                        {"sup_lhs_zero_rhs", rep.sup_lhs_zero_rhs},
                        {"failures", rep.failures}});
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/estimates.json") << out_json.dump(2) << '\n';
    std::ofstream csv(out_dir + "/estimates.csv");
    csv << "# fronttrack estimates v1\nestimate,samples,applicable,sup_ratio,tail_ratio,"
           "sup_lhs_zero_rhs,failures\n";
    for (const auto& e : out_json)
      csv << e["estimate"].get<std::string>() << ',' << e["samples"] << ',' << e["applicable"]
          << ',' << format_g17(e["sup_ratio"].get<double>()) << ','
          << format_g17(e["tail_ratio"].get<double>()) << ','
          << format_g17(e["sup_lhs_zero_rhs"].get<double>()) << ',' << e["failures"] << '\n';
  }
  return 0;
}

int cmd_calibrate(const std::string& scenario_file, const std::string& out_dir) {
  Scenario sc = load_scenario(scenario_file);
  auto sys = make_system(sc.system_id, sc.system_params);
  BoundaryLayerModel model = make_boundary_model(*sys);
  FunctionalConstants c = calibrate(*sys, model);
  json j;
  j["A"] = c.A_weight;
  j["K1"] = c.K1;
  j["K2"] = c.K2;
  j["K3"] = c.K3;
  j["K4"] = c.K4;
  j["K5"] = c.K5;
  j["delta"] = c.delta;
  j["delta_star"] = c.delta_star;
  j["chain_ok"] = c.chain_ok;
  for (const auto& [k, v] : c.measured_C) j["measured"][k] = v;
  std::cout << j.dump(2) << '\n';
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/constants.json") << j.dump(2) << '\n';
  }
  return 0;
}

std::vector<double> parse_state(const std::string& s) {
  std::vector<double> v;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) v.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) v.push_back(std::stod(cur));
  return v;
}

int cmd_riemann(const std::string& system_id, std::vector<double> left,
                std::vector<double> right) {
  auto sys = make_system(system_id);
  if ((int)left.size() != sys->N || (int)right.size() != sys->N) {
    std::cerr << "states must have " << sys->N << " components\n";
    return 2;
  }
  Vec ul(sys->N), ur(sys->N);
  for (int i = 0; i < sys->N; ++i) {
    ul[i] = left[i];
    ur[i] = right[i];
  }
  WaveFan fan = solve_riemann(*sys, ul, ur);
  for (int i = 1; i <= sys->N; ++i) {
    double s = fan.strengths[i - 1];
    if (std::abs(s) < 1e-12) continue;
    CurveEval ev = wave_fan_curve(*sys, i, fan.intermediate_states[i], s);
    const char* kind = ev.branch == WaveBranch::Shock
                           ? "shock"
                           : (ev.branch == WaveBranch::Contact ? "contact" : "rarefaction");
    double speed = ev.branch == WaveBranch::Rarefaction
                       ? lambda_of(*sys, i, fan.intermediate_states[i])
                       : ev.speed;
    std::cout << "family " << i << ": " << kind << " strength " << format_g17(s) << " speed "
              << format_g17(speed) << '\n';
  }
  return 0;
}

int cmd_brp(const std::string& system_id, std::vector<double> uplus, std::vector<double> ub) {
  auto sys = make_system(system_id);
  if ((int)uplus.size() != sys->N || (int)ub.size() != sys->N) {
    std::cerr << "states must have " << sys->N << " components\n";
    return 2;
  }
  Vec up(sys->N), b(sys->N);
  for (int i = 0; i < sys->N; ++i) {
    up[i] = uplus[i];
    b[i] = ub[i];
  }
  BoundaryLayerModel model = make_boundary_model(*sys);
  BRSolution sol = solve_boundary_riemann(*sys, model, up, b);
  static const char* names[] = {"non-characteristic", "i", "ii", "iii", "iv", "v", "vi",
                                "ld-contact", "ld-none"};
  std::cout << "branch " << names[sol.branch] << '\n';
  bool any = false;
  if (std::abs(sol.emitted_k) > 1e-12) {
    std::cout << "k-wave strength " << format_g17(sol.emitted_k) << '\n';
    any = true;
  }
  for (int i = 0; i < sol.s_upper.size(); ++i)
    if (std::abs(sol.s_upper[i]) > 1e-12) {
      int fam = model.characteristic ? model.k + 1 + i : model.k + i;
      std::cout << "family " << fam << " strength " << format_g17(sol.s_upper[i]) << '\n';
      any = true;
    }
  if (!any) std::cout << "no waves emitted, branch " << names[sol.branch] << '\n';
  std::cout << "trace xi_k " << format_g17(sol.trace.xi_k) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-driven wave front tracking for characteristic initial-boundary value "
               "problems"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir, system_id, left_str, right_str;
  std::vector<double> eps_list;
  double slack = -1;
  std::int64_t cap = -1;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int samples = 1000;

  auto* c_run = app.add_subcommand("run", "run a scenario and write logs");
  c_run->add_option("--scenario", scenario_file)->required();
  c_run->add_option("--out", out_dir);
  c_run->add_option("--slack", slack);
  c_run->add_option("--cap", cap);
  auto* seed_opt = c_run->add_option("--seed", seed);

  auto* c_sweep = app.add_subcommand("sweep", "epsilon convergence study");
  c_sweep->add_option("--scenario", scenario_file)->required();
  c_sweep->add_option("--out", out_dir);
  c_sweep->add_option("--eps-list", eps_list);

  auto* c_est = app.add_subcommand("estimates", "measure the interaction estimates");
  c_est->add_option("--scenario", scenario_file)->required();
  c_est->add_option("--out", out_dir);
  c_est->add_option("--samples", samples);
  c_est->add_option("--seed", seed);

  auto* c_cal = app.add_subcommand("calibrate", "calibrate the functional constants");
  c_cal->add_option("--scenario", scenario_file)->required();
  c_cal->add_option("--out", out_dir);

  auto* c_rie = app.add_subcommand("riemann", "solve one interior Riemann problem");
  c_rie->add_option("system", system_id)->required();
  c_rie->add_option("left", left_str, "left state, comma-separated")->required();
  c_rie->add_option("right", right_str, "right state, comma-separated")->required();

  auto* c_brp = app.add_subcommand("brp", "solve one boundary Riemann problem");
  c_brp->add_option("system", system_id)->required();
  c_brp->add_option("uplus", left_str, "interior state, comma-separated")->required();
  c_brp->add_option("ub", right_str, "boundary datum, comma-separated")->required();

  auto* c_plot = app.add_subcommand("plot", "emit SVG plots from a run's CSV outputs");
  c_plot->add_option("--out", out_dir)->required();

  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;

  try {
    if (c_run->parsed()) return cmd_run(scenario_file, out_dir, slack, cap, seed, have_seed);
    if (c_sweep->parsed()) return cmd_sweep(scenario_file, out_dir, eps_list);
    if (c_est->parsed()) return cmd_estimates(scenario_file, out_dir, samples, seed ? seed : 2024);
    if (c_cal->parsed()) return cmd_calibrate(scenario_file, out_dir);
    if (c_rie->parsed()) return cmd_riemann(system_id, parse_state(left_str), parse_state(right_str));
    if (c_brp->parsed()) return cmd_brp(system_id, parse_state(left_str), parse_state(right_str));
    if (c_plot->parsed()) {
      plot_outputs(out_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
