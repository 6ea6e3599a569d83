#include "fronttrack/scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fronttrack {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Vec vec_of(const json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FtError(ErrCode::BadScenario, "cannot open scenario file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw FtError(ErrCode::BadScenario, std::string("scenario parse error: ") + e.what());
  }
  Scenario sc;
  sc.name = j.value("name", fs::path(path).stem().string());
  const json& sysj = j.at("system");
  sc.system_id = sysj.at("id").get<std::string>();
  if (sysj.contains("params"))
    for (auto& [key, val] : sysj.at("params").items()) sc.system_params[key] = val.get<double>();

  auto load_profile = [&](const json& pj, std::vector<double>& breaks, std::vector<Vec>& values) {
    if (pj.contains("breakpoints"))
      for (const auto& b : pj.at("breakpoints")) breaks.push_back(b.get<double>());
    for (const auto& v : pj.at("values")) values.push_back(vec_of(v));
    if (values.size() != breaks.size() + 1)
      throw FtError(ErrCode::BadScenario, "values must have one more entry than breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
      if (breaks[i] <= breaks[i - 1])
        throw FtError(ErrCode::BadScenario, "breakpoints must be strictly increasing");
  };
  load_profile(j.at("u0"), sc.u0.breaks, sc.u0.values);
  std::vector<double> ubb;
  load_profile(j.at("ub"), ubb, sc.ub.values);
  sc.ub.times = {0.0};
  for (double b : ubb) sc.ub.times.push_back(b);
  sc.states_in_v = j.value("coords", std::string("u")) == "v";

  if (j.contains("eps")) {
    const json& e = j.at("eps");
    sc.eps = e.value("eps", 1e-2);
    if (e.contains("r_eps") && e.at("r_eps").is_number()) sc.r_eps = e.at("r_eps").get<double>();
    if (e.contains("omega_eps") && e.at("omega_eps").is_number())
      sc.omega_eps = e.at("omega_eps").get<double>();
    if (e.contains("lambda_hat") && e.at("lambda_hat").is_number())
      sc.lambda_hat = e.at("lambda_hat").get<double>();
  }
  if (j.contains("constants") && j.at("constants").is_object()) {
    const json& c = j.at("constants");
    sc.calibrate_constants = false;
    sc.constants.A_weight = c.value("A", 4.0);
    sc.constants.K1 = c.value("K1", 8.0);
    sc.constants.K2 = c.value("K2", 4.0);
    sc.constants.K3 = c.value("K3", 4.0);
    sc.constants.K4 = c.value("K4", 4.0);
    sc.constants.K5 = c.value("K5", 4.0);
    sc.constants.delta = c.value("delta", 0.05);
    sc.constants.delta_star = c.value("delta_star", 0.01);
  }
  sc.t_end = j.value("T_end", 1.0);
  sc.x_max = j.value("X_max", 10.0);
  if (j.contains("snapshot_times"))
    for (const auto& t : j.at("snapshot_times")) sc.snapshot_times.push_back(t.get<double>());
  if (!j.contains("seed")) throw FtError(ErrCode::BadScenario, "scenario must carry an rng seed");
  sc.seed = j.at("seed").get<std::uint64_t>();
  sc.slack = j.value("slack", 1.05);
  sc.event_cap = j.value("cap", std::int64_t(1000000));
  sc.enforce_data_budget = j.value("enforce_data_budget", false);
  return sc;
}

RunConfig make_run_config(const Scenario& sc, const SystemSpec& sys,
                          const FunctionalConstants& constants) {
  RunConfig cfg;
  cfg.u0 = sc.u0;
  cfg.ub = sc.ub;
  if (sc.states_in_v) {
    for (Vec& v : cfg.u0.values) v = sys.u_of_v(v);
    for (Vec& v : cfg.ub.values) v = sys.u_of_v(v);
  }
  for (const Vec& v : cfg.u0.values)
    if (!sys.in_working_box(v))
      throw FtError(ErrCode::BadScenario, "initial state outside the working box");
  for (const Vec& v : cfg.ub.values)
    if (!sys.in_working_box(v))
      throw FtError(ErrCode::BadScenario, "boundary state outside the working box");
  cfg.params.eps = sc.eps;
  cfg.params.r_eps = sc.r_eps > 0 ? sc.r_eps : sc.eps;
  cfg.params.omega_eps = sc.omega_eps > 0 ? sc.omega_eps : sc.eps * sc.eps;
  cfg.params.lambda_hat = sc.lambda_hat > 0 ? sc.lambda_hat : 0.0;
  cfg.constants = constants;
  cfg.t_end = sc.t_end;
  cfg.x_max = sc.x_max;
  cfg.snapshot_times = sc.snapshot_times;
  cfg.seed = sc.seed;
  cfg.slack = sc.slack;
  cfg.event_cap = sc.event_cap;
  cfg.enforce_data_budget = sc.enforce_data_budget;
  return cfg;
}

RunArtifacts run_scenario(const Scenario& sc) {
  RunArtifacts art;
  art.sys = make_system(sc.system_id, sc.system_params);
  art.model = make_boundary_model(*art.sys);
  art.constants = sc.calibrate_constants ? calibrate(*art.sys, art.model) : sc.constants;
  art.cfg = make_run_config(sc, *art.sys, art.constants);
  art.traj = run(*art.sys, art.model, art.cfg);
  return art;
}

namespace {

void write_fronts_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "# fronttrack fronts log v1\n";
  out << "t,x,event,accurate,families,s_a,s_b,s_hit,datum_jump,varsigma_minus,xi_k_before,"
         "delta_upsilon,bound,verdict,delta_lambda,lambda_verdict\n";
  for (const Verdict& v : traj.events) {
    const EventRecord& e = v.event;
    std::string fams;
    for (std::size_t i = 0; i < e.families.size(); ++i)
      fams += (i ? "|" : "") + std::to_string(e.families[i]);
    out << format_g17(e.t) << ',' << format_g17(e.x) << ',' << to_string(e.kind) << ','
        << (e.accurate ? 1 : 0) << ',' << fams << ',' << format_g17(e.s_a) << ','
        << format_g17(e.s_b) << ',' << format_g17(e.s_hit) << ',' << format_g17(e.datum_jump)
        << ',' << format_g17(e.varsigma_minus) << ',' << format_g17(e.xi_k_before) << ','
        << format_g17(v.delta_upsilon) << ',' << format_g17(v.bound) << ','
        << (v.pass ? "pass" : "FAIL") << ',' << format_g17(v.delta_lambda) << ','
        << (v.lambda_pass ? "pass" : "FAIL") << '\n';
  }
}

void write_xt_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "# fronttrack xt segments v1\n";
  out << "id,family,kind,strength,generation,t0,x0,t1,x1\n";
  for (const FrontSegment& s : traj.segments)
    out << s.id << ',' << s.family << ',' << to_string(s.kind) << ',' << format_g17(s.s) << ','
        << s.generation << ',' << format_g17(s.t0) << ',' << format_g17(s.x0) << ','
        << format_g17(s.t1) << ',' << format_g17(s.x1) << '\n';
}

void write_snapshots_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "# fronttrack snapshots v1\n";
  out << "t,x,components...\n";
  for (const ProfileSnapshot& s : traj.snapshots) {
    // piece boundaries: 0, xs..., and the value to the right of each
    for (std::size_t i = 0; i < s.states.size(); ++i) {
      double x = (i == 0) ? 0.0 : s.xs[i - 1];
      out << format_g17(s.t) << ',' << format_g17(x);
      for (int d = 0; d < s.states[i].size(); ++d) out << ',' << format_g17(s.states[i][d]);
      out << '\n';
    }
  }
}

void write_functionals_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "# fronttrack functionals v1\n";
  out << "t,V,Q,R,S,Z,Upsilon,F,Lambda,xi_k_abs\n";
  for (const FunctionalSnapshot& s : traj.series)
    out << format_g17(s.t) << ',' << format_g17(s.V) << ',' << format_g17(s.Q) << ','
        << format_g17(s.R) << ',' << format_g17(s.S) << ',' << format_g17(s.Z) << ','
        << format_g17(s.Upsilon) << ',' << format_g17(s.F) << ',' << format_g17(s.Lambda) << ','
        << format_g17(s.xi_k_abs) << '\n';
}

void write_trace_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "# fronttrack trace history v1\n";
  out << "t,branch,xi_k,u_bar...,u_b...\n";
  for (const auto& [t, tr] : traj.trace_history) {
    out << format_g17(t) << ',' << tr.branch << ',' << format_g17(tr.xi_k);
    for (int d = 0; d < tr.u_bar.size(); ++d) out << ',' << format_g17(tr.u_bar[d]);
    for (int d = 0; d < tr.u_b.size(); ++d) out << ',' << format_g17(tr.u_b[d]);
    out << '\n';
  }
}

}  // namespace

void write_outputs(const std::string& out_dir, const Scenario& sc, const RunArtifacts& art) {
  fs::create_directories(out_dir);
  write_fronts_csv(out_dir + "/fronts.csv", art.traj);
  write_xt_csv(out_dir + "/xt.csv", art.traj);
  write_snapshots_csv(out_dir + "/snapshots.csv", art.traj);
  write_functionals_csv(out_dir + "/functionals.csv", art.traj);
  write_trace_csv(out_dir + "/trace.csv", art.traj);

  json summary;
  summary["schema"] = "fronttrack-summary-v1";
  summary["scenario"] = sc.name;
  summary["system"] = sc.system_id;
  summary["eps"] = art.cfg.params.eps;
  summary["r_eps"] = art.cfg.params.r_eps;
  summary["omega_eps"] = art.cfg.params.omega_eps;
  summary["lambda_hat"] = art.cfg.params.lambda_hat;
  summary["seed"] = sc.seed;
  summary["event_count"] = art.traj.events.size();
  summary["sup_tv"] = art.traj.sup_tv;
  summary["upsilon0"] = art.traj.upsilon0;
  summary["max_raref_strength"] = art.traj.max_raref_strength;
  summary["max_np_strength_total"] = art.traj.max_np_strength_total;
  summary["all_verdicts_pass"] = art.traj.all_pass;
  summary["violations"] = json::array();
  for (const Violation& v : art.traj.violations)
    summary["violations"].push_back({{"t", v.t}, {"what", v.what}});
  json counters;
  for (const auto& [k, v] : art.traj.counters) counters[k] = v;
  summary["counters"] = counters;
  json cc;
  cc["A"] = art.constants.A_weight;
  cc["K1"] = art.constants.K1;
  cc["K2"] = art.constants.K2;
  cc["K3"] = art.constants.K3;
  cc["K4"] = art.constants.K4;
  cc["K5"] = art.constants.K5;
  cc["delta"] = art.constants.delta;
  cc["delta_star"] = art.constants.delta_star;
  cc["chain_ok"] = art.constants.chain_ok;
  for (const auto& [k, v] : art.constants.measured_C) cc["measured"][k] = v;
  summary["constants"] = cc;
  std::ofstream(out_dir + "/summary.json") << summary.dump(2) << '\n';
}

// --------------------------------------------------------------------------
// SVG plotting from the CSV outputs.

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FtError(ErrCode::BadScenario, "cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kFamilyColors[] = {"#888888", "#d62728", "#1f77b4", "#2ca02c",
                               "#9467bd", "#ff7f0e", "#17becf"};

struct SvgCanvas {
  std::ostringstream body;
  double w = 640, h = 480, margin = 48;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return margin + (x - x0) / (x1 - x0 + 1e-300) * (w - 2 * margin); }
  double py(double y) const {
    return h - margin - (y - y0) / (y1 - y0 + 1e-300) * (h - 2 * margin);
  }
  void line(double xa, double ya, double xb, double yb, const std::string& color, double width,
            bool dashed = false) {
    body << "<line x1='" << px(xa) << "' y1='" << py(ya) << "' x2='" << px(xb) << "' y2='"
         << py(yb) << "' stroke='" << color << "' stroke-width='" << width << "'"
         << (dashed ? " stroke-dasharray='4 3'" : "") << "/>\n";
  }
  void text(double x, double y, const std::string& s) {
    body << "<text x='" << x << "' y='" << y << "' font-size='12' font-family='sans-serif'>" << s
         << "</text>\n";
  }
  void save(const std::string& path, const std::string& xlabel, const std::string& ylabel) {
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    // axes
    out << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - margin << "' y2='"
        << h - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << margin << "' y2='"
        << margin << "' stroke='black'/>\n";
    out << "<text x='" << w / 2 << "' y='" << h - 10
        << "' font-size='12' font-family='sans-serif'>" << xlabel << "</text>\n";
    out << "<text x='12' y='" << margin - 8 << "' font-size='12' font-family='sans-serif'>"
        << ylabel << "</text>\n";
    out << body.str();
    out << "</svg>\n";
  }
};

}  // namespace

void plot_outputs(const std::string& out_dir) {
  // x-t diagram
  {
    auto rows = read_csv(out_dir + "/xt.csv");
    SvgCanvas c;
    c.x0 = 0;
    c.x1 = 1e-9;
    c.y0 = 0;
    c.y1 = 1e-9;
    for (auto& r : rows) {
      if (r.size() < 9 || r[0] == "id") continue;
      c.x1 = std::max({c.x1, std::stod(r[6]), std::stod(r[8])});
      c.y1 = std::max({c.y1, std::stod(r[5]), std::stod(r[7])});
    }
    for (auto& r : rows) {
      if (r.size() < 9 || r[0] == "id") continue;
      int family = std::stoi(r[1]);
      bool np = r[2] == "non-physical";
      const char* color = kFamilyColors[std::min<std::size_t>(family, 6)];
      c.line(std::stod(r[6]), std::stod(r[5]), std::stod(r[8]), std::stod(r[7]),
             np ? "#555555" : color, np ? 1.0 : 1.4, np);
    }
    c.save(out_dir + "/xt.svg", "x", "t");
  }
  // functional decay
  {
    auto rows = read_csv(out_dir + "/functionals.csv");
    SvgCanvas c;
    c.x0 = 0;
    c.x1 = 1e-9;
    c.y0 = 0;
    c.y1 = 1e-9;
    std::vector<std::array<double, 3>> pts;
    for (auto& r : rows) {
      if (r.size() < 10 || r[0] == "t") continue;
      double t = std::stod(r[0]), ups = std::stod(r[6]), lam = std::stod(r[8]);
      pts.push_back({t, ups, lam});
      c.x1 = std::max(c.x1, t);
      c.y1 = std::max({c.y1, ups, lam});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      c.line(pts[i - 1][0], pts[i - 1][1], pts[i][0], pts[i][1], "#d62728", 1.5);
      c.line(pts[i - 1][0], pts[i - 1][2], pts[i][0], pts[i][2], "#1f77b4", 1.5);
    }
    c.text(c.w - 160, c.margin + 10, "Upsilon (red), Lambda (blue)");
    c.save(out_dir + "/functionals.svg", "t", "value");
  }
  // final snapshot profile (first component)
  {
    auto rows = read_csv(out_dir + "/snapshots.csv");
    if (!rows.empty()) {
      double t_last = 0;
      for (auto& r : rows)
        if (r.size() >= 3 && r[0] != "t") t_last = std::max(t_last, std::stod(r[0]));
      SvgCanvas c;
      c.x0 = 0;
      c.x1 = 1e-9;
      c.y0 = 1e300;
      c.y1 = -1e300;
      std::vector<std::pair<double, double>> pts;
      for (auto& r : rows) {
        if (r.size() < 3 || r[0] == "t") continue;
        if (std::abs(std::stod(r[0]) - t_last) > 1e-12) continue;
        double x = std::stod(r[1]), v = std::stod(r[2]);
        pts.push_back({x, v});
        c.x1 = std::max(c.x1, x);
        c.y0 = std::min(c.y0, v);
        c.y1 = std::max(c.y1, v);
      }
      if (c.y0 > c.y1) {
        c.y0 = 0;
        c.y1 = 1;
      }
      double pad = 0.1 * (c.y1 - c.y0 + 1e-9);
      c.y0 -= pad;
      c.y1 += pad;
      c.x1 *= 1.05;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        c.line(pts[i].first, pts[i].second, pts[i + 1].first, pts[i].second, "#2ca02c", 1.6);
        c.line(pts[i + 1].first, pts[i].second, pts[i + 1].first, pts[i + 1].second, "#2ca02c",
               1.6);
      }
      if (!pts.empty())
        c.line(pts.back().first, pts.back().second, c.x1, pts.back().second, "#2ca02c", 1.6);
      c.save(out_dir + "/profile.svg", "x", "u[0]");
    }
  }
}

}  // namespace fronttrack
