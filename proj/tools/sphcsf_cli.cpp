// sphcsf: command-line front end for the curve shortening lab.
//
//   sphcsf <subcommand> [--config file.json] [--out dir] [--seed n] [--format csv|jsonl] [--quiet]
//
// Exit codes: 0 ok, 1 runtime failure (or a failing verify check), 2 config error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphcsf/curve_io.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/graph_flow.hpp"
#include "sphcsf/jordan.hpp"
#include "sphcsf/json_io.hpp"
#include "sphcsf/levelset.hpp"
#include "sphcsf/straighten.hpp"
#include "sphcsf/verify.hpp"

namespace fs = std::filesystem;
using namespace sphcsf;

namespace {

constexpr const char* tool_version = "0.1.0";

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); }

/// Typed access to one JSON object with field names in error messages.
class Params {
 public:
  Params(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_null() && !j_.is_object()) config_error(prefix_ + ": expected an object");
  }

  [[nodiscard]] std::string field(const std::string& key) const { return prefix_ + "." + key; }
  [[nodiscard]] bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  [[nodiscard]] json get(const char* key) const { return has(key) ? j_.at(key) : json(nullptr); }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) config_error(field(it.key()) + ": unknown field");
    }
  }

  [[nodiscard]] double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number()) config_error(field(key) + ": expected a number");
    return j_[key].get<double>();
  }
  [[nodiscard]] double positive(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) config_error(field(key) + ": must be positive");
    return v;
  }
  [[nodiscard]] double non_negative(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v >= 0.0) || !std::isfinite(v)) config_error(field(key) + ": must be non-negative");
    return v;
  }
  [[nodiscard]] std::size_t count(const char* key, std::size_t fallback, std::size_t min = 0) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number_integer() || j_[key].get<long long>() < static_cast<long long>(min)) {
      config_error(field(key) + ": expected an integer >= " + std::to_string(min));
    }
    return j_[key].get<std::size_t>();
  }
  [[nodiscard]] bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_boolean()) config_error(field(key) + ": expected true or false");
    return j_[key].get<bool>();
  }
  [[nodiscard]] std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_string()) config_error(field(key) + ": expected a string");
    return j_[key].get<std::string>();
  }
  [[nodiscard]] SpherePoint point(const char* key, const SpherePoint& fallback) const {
    if (!has(key)) return fallback;
    const Vec3 v = vec_from_json(j_[key], field(key));
    if (!(norm(v) > 1e-12)) config_error(field(key) + ": zero vector");
    return SpherePoint(v);
  }

  [[nodiscard]] FlowConfig flow(double max_time) const {
    FlowConfig cfg = flow_config_from_json(j_.is_null() ? json::object() : j_, prefix_ + ".");
    cfg.max_time = max_time;
    return cfg;
  }

 private:
  json j_;
  std::string prefix_;
};

/// Output directory of one scenario plus everything the manifest needs.
struct Run {
  std::string name;
  std::string kind;
  std::uint64_t seed = 1;
  json config;
  fs::path dir;
  bool jsonl = true;
  bool quiet = false;
  json manifest_extra = json::object();
  std::vector<std::string> outputs;

  std::ofstream open(const std::string& rel) {
    const fs::path p = dir / rel;
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error(ErrorKind::ConfigInvalid, "output: cannot write " + p.string());
    outputs.push_back(rel);
    return os;
  }

  void write_json(const std::string& rel, const json& j) { open(rel) << j.dump(2) << '\n'; }

  /// Rows of already formatted cells.
  void write_csv(const std::string& rel, const std::string& header, const std::vector<std::vector<std::string>>& rows) {
    auto os = open(rel);
    os << header << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
  }

  void say(const std::string& line) const {
    if (!quiet) std::cout << line << '\n';
  }
};

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

/// Trajectory-like series: jsonl lines or tables/trajectory.csv, depending on --format.
void write_series(Run& run, const std::vector<std::string>& columns, const std::vector<json>& lines) {
  if (run.jsonl) {
    auto os = run.open("trajectory.jsonl");
    for (const auto& l : lines) os << l.dump() << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : lines) {
    std::vector<std::string> row;
    for (const auto& c : columns) {
      const json& v = l.contains(c) ? l.at(c) : json(nullptr);
      row.push_back(v.is_number() ? cell(v.get<double>()) : std::string());
    }
    rows.push_back(std::move(row));
  }
  std::string header;
  for (std::size_t i = 0; i < columns.size(); ++i) header += (i ? "," : "") + columns[i];
  run.write_csv("tables/trajectory.csv", header, rows);
}

ClosedSphereCurve require_closed(const AnyCurve& c, const std::string& field) {
  if (const auto* closed = std::get_if<ClosedSphereCurve>(&c)) return *closed;
  config_error(field + ": a closed curve is required");
}

AnyCurve curve_param(const Params& p, const char* key, const json& fallback, std::uint64_t seed) {
  const json spec = p.has(key) ? p.get(key) : fallback;
  try {
    return curve_from_json(spec, seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ConfigInvalid) throw;
    const std::string msg = e.what();
    config_error(p.field(key) + ": " + msg.substr(msg.find(": ") + 2));
  }
}

// ---- simulate --------------------------------------------------------------

template <SphereCurve Curve>
json simulate_curve(Run& run, const Curve& c0, FlowConfig cfg, bool dump_nodes, const std::optional<SpherePoint>& pole,
                    double r0) {
  cfg.keep_curves = dump_nodes || pole.has_value();
  FlowTrajectory<Curve> traj;
  if constexpr (Curve::is_closed) traj = evolve_closed(c0, cfg);
  else traj = evolve_arc(c0, cfg);

  std::vector<json> lines;
  for (const auto& s : traj.snapshots) {
    json l = snapshot_line(s, false);
    if constexpr (Curve::is_closed) {
      if (pole && s.curve) l["radius"] = mean_radius(*s.curve, *pole);
    }
    if (dump_nodes && s.curve) {
      json nodes = json::array();
      for (const auto& v : s.curve->nodes()) nodes.push_back(to_json(v));
      l["nodes"] = std::move(nodes);
    }
    lines.push_back(std::move(l));
  }
  write_series(run, {"t", "length", "total_curvature", "bending", "area", "radius"}, lines);
  {
    auto os = run.open("tables/final_curve.csv");
    write_curve_csv(os, traj.final_curve());
  }

  json report;
  report["status"] = std::string(to_string(traj.status));
  report["note"] = traj.note;
  report["final_time"] = traj.final_time();
  report["steps"] = traj.steps;
  report["snapshots"] = traj.snapshots.size();
  report["final"] = to_json(traj.snapshots.back().diag, Curve::is_closed);
  if constexpr (Curve::is_closed) {
    if (pole) {
      const double t = traj.final_time();
      const double measured = mean_radius(traj.final_curve(), *pole);
      const double oracle = circle_oracle(r0, t);
      json o{{"r0", r0}, {"t", t}, {"final_radius", measured}, {"oracle_radius", oracle},
             {"abs_error", std::abs(measured - oracle)}};
      report["oracle"] = o;
      run.manifest_extra["oracle"] = o;
      run.say("final radius " + format_double(measured) + " vs oracle " + format_double(oracle));
    }
  }
  run.say("status " + std::string(to_string(traj.status)) + " at t=" + format_double(traj.final_time()) + " after " +
          std::to_string(traj.steps) + " steps");
  return report;
}

json cmd_simulate(Run& run, const Params& p) {
  p.only({"curve", "t", "dump_nodes", "dt", "remesh_every", "target_nodes", "extinction_length", "snapshot_interval"});
  const FlowConfig cfg = p.flow(p.non_negative("t", 0.5));
  const json spec = p.has("curve") ? p.get("curve") : json{{"type", "Circle"}, {"r0", pi / 3.0}};
  const AnyCurve c0 = curve_param(p, "curve", spec, run.seed);
  const bool dump = p.flag("dump_nodes", false);

  std::optional<SpherePoint> pole;
  double r0 = 0.0;
  if (spec.value("type", "") == "Circle") {
    const Params cp(spec, p.field("curve"));
    pole = cp.point("pole", SpherePoint(0, 0, 1));
    r0 = cp.number("r0", pi / 3.0);
    if (!(r0 > 0.0 && r0 < half_pi)) pole.reset();  // the oracle only covers caps smaller than a hemisphere
  }
  return std::visit([&](const auto& c) { return simulate_curve(run, c, cfg, dump, pole, r0); }, c0);
}

// ---- multiplicity ----------------------------------------------------------

json cmd_multiplicity(Run& run, const Params& p) {
  p.only({"curve", "r", "pole_samples", "refine", "poles", "t", "dt", "remesh_every", "target_nodes",
          "extinction_length", "snapshot_interval"});
  const double r = p.positive("r", 0.05);
  if (!(r < pi / 4.0)) config_error(p.field("r") + ": must lie in (0, pi/4)");
  const std::size_t samples = p.count("pole_samples", 2000, 100);
  const bool refine = p.flag("refine", true);
  const double t = p.non_negative("t", 0.0);
  const ClosedSphereCurve c0 =
      require_closed(curve_param(p, "curve", {{"type", "KochLike"}, {"depth", 2}}, run.seed), p.field("curve"));

  std::vector<std::pair<double, ClosedSphereCurve>> stages{{0.0, c0}};
  if (t > 0.0) {
    FlowConfig cfg = p.flow(t);
    if (!p.has("snapshot_interval")) cfg.snapshot_interval = t / 4.0;
    cfg.target_nodes = std::max(cfg.target_nodes, c0.size());
    const auto traj = evolve_closed(c0, cfg);
    for (const auto& s : traj.snapshots) {
      if (s.t > 0.0 && s.curve && traj.status != TerminalStatus::Extinct) stages.emplace_back(s.t, *s.curve);
    }
  }

  json sup = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& [ts, c] : stages) {
    const auto m = multiplicity_sup(c, r, samples, refine);
    sup.push_back({{"t", ts}, {"value", m.value}, {"argmax", to_json(m.argmax.pole())}, {"poles_sampled", m.poles_sampled}});
    const Vec3& q = m.argmax.pole().vec();
    rows.push_back({cell(ts), cell(m.value), cell(q.x), cell(q.y), cell(q.z)});
    run.say("t=" + format_double(ts) + " sup multiplicity " + std::to_string(m.value));
  }
  run.write_csv("tables/multiplicity.csv", "t,sup,pole_x,pole_y,pole_z", rows);

  json at_poles = json::array();
  if (p.has("poles")) {
    const json poles = p.get("poles");
    if (!poles.is_array()) config_error(p.field("poles") + ": expected a list of [x, y, z]");
    for (const auto& q : poles) {
      const Vec3 v = vec_from_json(q, p.field("poles"));
      if (!(norm(v) > 1e-12)) config_error(p.field("poles") + ": zero vector");
      at_poles.push_back(to_json(multiplicity_at(c0, GreatCircle(SpherePoint(v)), r)));
    }
  }
  return {{"r", r}, {"sup", sup}, {"at_poles", at_poles}};
}

// ---- spacing ---------------------------------------------------------------

json cmd_spacing(Run& run, const Params& p) {
  p.only({"curve", "theta", "x_samples"});
  const double theta = p.positive("theta", 0.25);
  if (!(theta < pi / 4.0)) config_error(p.field("theta") + ": must lie in (0, pi/4)");
  const std::size_t xs = p.count("x_samples", 2000, 1);
  const ClosedSphereCurve c = require_closed(
      curve_param(p, "curve", {{"type", "PerturbedLatitude"}, {"r0", 1.0}, {"amplitude", 0.05}, {"mode", 3}, {"nodes", 256}},
                  run.seed),
      p.field("curve"));
  const Spacing s = construct_spacing(c, theta, xs);
  const SpacingVerdict v = verify_spacing(c, s, xs);
  std::vector<std::vector<std::string>> rows;
  for (const auto& q : s.points) rows.push_back({cell(q.x()), cell(q.y()), cell(q.z())});
  run.write_csv("tables/spacing_points.csv", "x,y,z", rows);
  json verdict{{"ok", v.ok}, {"failed", v.failed}, {"worst_angle", v.worst_angle}};
  verdict["counterexample"] = v.counterexample ? to_json(*v.counterexample) : json(nullptr);
  run.say(std::to_string(s.points.size()) + " points, C=" + format_double(s.C) + (v.ok ? ", verified" : ", NOT verified"));
  return {{"spacing", to_json(s)}, {"verification", verdict}};
}

// ---- straighten ------------------------------------------------------------

json cmd_straighten(Run& run, const Params& p) {
  p.only({"curve", "r", "C", "alpha", "x", "pole", "t", "nodes", "dt", "remesh_every", "target_nodes",
          "extinction_length", "snapshot_interval"});
  StraighteningParams sp;
  sp.r = p.positive("r", sp.r);
  sp.C = p.positive("C", sp.C);
  sp.alpha = p.positive("alpha", sp.alpha);
  const SpherePoint pole = p.point("pole", SpherePoint(0, 0, 1));
  sp.x = p.point("x", sp.x);
  if (std::abs(dot(pole, sp.x)) > 1e-9) config_error(p.field("x") + ": must lie on the great circle of the pole");
  const GreatCircle g(pole, sp.x);
  const double t = p.positive("t", 0.3);
  FlowConfig cfg = p.flow(t);
  if (!p.has("snapshot_interval")) cfg.snapshot_interval = t / 30.0;

  ClosedSphereCurve ell;
  if (p.has("curve")) {
    ell = require_closed(curve_param(p, "curve", nullptr, run.seed), p.field("curve"));
  } else {
    WiggleParams wp;
    wp.r = sp.r;
    wp.C = sp.C;
    wp.alpha = sp.alpha;
    wp.seed = run.seed;
    wp.nodes = p.count("nodes", wp.nodes, 64);
    try {
      ell = make_leafable_wiggle(g, sp.x, wp).curve;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParamDomain) config_error(p.field("r") + ": " + e.what());
      throw;
    }
  }
  const auto res = straightening_experiment(ell, g, sp, t, cfg);
  std::vector<json> lines;
  for (std::size_t i = 0; i < res.deviation.size(); ++i) {
    lines.push_back({{"t", res.deviation[i].first}, {"deviation", res.deviation[i].second}, {"band", res.band[i].second}});
  }
  write_series(run, {"t", "deviation", "band"}, lines);
  json report{{"leafable", res.leafable},
              {"initial_excursion", res.initial_excursion},
              {"barrier_contained", res.barrier_contained},
              {"expanded_band_contained", res.expanded_band_contained},
              {"status", std::string(to_string(res.status))}};
  report["first_within_alpha"] = res.first_within_alpha ? json(*res.first_within_alpha) : json(nullptr);
  report["final_deviation"] = res.deviation.empty() ? json(nullptr) : json(res.deviation.back().second);
  run.say("final C1 deviation " + (res.deviation.empty() ? std::string("n/a") : format_double(res.deviation.back().second)));
  return report;
}

// ---- levelset --------------------------------------------------------------

void sandwich_table(Run& run, const SandwichResult& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : r.rows) {
    rows.push_back({std::to_string(row.n), cell(row.eps), row.ok ? cell(row.gap) : "", row.ok ? cell(row.area) : ""});
  }
  run.write_csv("tables/sandwich.csv", "n,eps,gap,area", rows);
}

json cmd_levelset(Run& run, const Params& p) {
  p.only({"mode", "curve", "levels", "eps0", "t", "alpha", "beta", "dt_sample", "max_time", "dt", "remesh_every",
          "target_nodes", "extinction_length", "snapshot_interval"});
  const std::string mode = p.text("mode", "sandwich");
  if (mode == "sandwich") {
    const int levels = static_cast<int>(p.count("levels", 4, 1));
    const double eps0 = p.positive("eps0", 0.1);
    const double t = p.positive("t", 0.05);
    const ClosedSphereCurve c = require_closed(
        curve_param(p, "curve", {{"type", "PerturbedLatitude"}, {"r0", 1.0}, {"amplitude", 0.05}, {"mode", 3}, {"nodes", 256}},
                    run.seed),
        p.field("curve"));
    const auto res = sandwich_flow(c, levels, t, eps0, p.flow(t));
    sandwich_table(run, res);
    run.say("verdict " + std::string(to_string(res.verdict)));
    return to_json(res);
  }
  if (mode != "annulus" && mode != "area-ode" && mode != "classify") {
    config_error(p.field("mode") + ": expected sandwich, annulus, area-ode or classify");
  }
  const ClosedSphereCurve a =
      require_closed(curve_param(p, "alpha", {{"type", "Circle"}, {"r0", 0.8}}, run.seed), p.field("alpha"));
  const ClosedSphereCurve b =
      require_closed(curve_param(p, "beta", {{"type", "Circle"}, {"r0", 1.0}}, run.seed), p.field("beta"));
  AnnulusState s0;
  try {
    s0 = make_annulus(a, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainError) config_error(p.field("beta") + ": " + e.what());
    throw;
  }
  if (mode == "annulus") {
    const double t = p.positive("t", 0.05);
    const auto res = sandwich_flow(s0, t, p.flow(t));
    sandwich_table(run, res);
    run.say("verdict " + std::string(to_string(res.verdict)));
    json j = to_json(res);
    j["initial_area"] = s0.area;
    return j;
  }
  if (mode == "area-ode") {
    const double t = p.positive("t", 0.1);
    const double dts = p.positive("dt_sample", 0.01);
    const double err = area_ode_check(s0, t, dts, p.flow(t));
    run.say("max relative deviation from mu0 e^t: " + format_double(err));
    return {{"initial_area", s0.area}, {"t", t}, {"dt_sample", dts}, {"max_rel_error", err}};
  }
  const double max_time = p.positive("max_time", 3.0);
  const auto rep = classify_long_term(s0, max_time, p.flow(max_time));
  std::vector<std::vector<std::string>> rows;
  for (const auto& [t, area] : rep.area) rows.push_back({cell(t), cell(area)});
  run.write_csv("tables/area.csv", "t,area", rows);
  run.say("verdict " + std::string(to_string(rep.verdict)));
  return to_json(rep);
}

// ---- graphflow -------------------------------------------------------------

PeriodicGraph profile_param(const Params& p) {
  const Params prof(p.get("profile"), p.field("profile"));
  prof.only({"samples", "constant", "modes", "file"});
  if (prof.has("file")) {
    std::ifstream in(prof.text("file", ""));
    if (!in) config_error(prof.field("file") + ": cannot open " + prof.text("file", ""));
    return read_profile_csv(in);
  }
  const std::size_t n = prof.count("samples", 256, 64);
  if (!std::has_single_bit(n)) config_error(prof.field("samples") + ": must be a power of two");
  const double c = prof.number("constant", 0.0);
  struct Mode {
    double amp, k, phase;
  };
  std::vector<Mode> modes;
  const bool defaulted = !prof.has("modes") && !prof.has("constant");
  const json mj = defaulted ? json::array({{{"amplitude", 0.2}, {"k", 2}}}) : prof.get("modes");
  if (mj.is_null()) return PeriodicGraph::sample(n, [c](double) { return c; });
  if (!mj.is_array()) config_error(prof.field("modes") + ": expected a list");
  for (const auto& m : mj) {
    const Params mp(m, prof.field("modes[]"));
    mp.only({"amplitude", "k", "phase"});
    modes.push_back({mp.number("amplitude", 0.0), mp.number("k", 1.0), mp.number("phase", 0.0)});
  }
  return PeriodicGraph::sample(n, [&](double x) {
    double u = c;
    for (const auto& m : modes) u += m.amp * std::sin(m.k * x + m.phase);
    return u;
  });
}

json cmd_graphflow(Run& run, const Params& p) {
  p.only({"profile", "t", "dt", "crosscheck", "flow_dt", "pole"});
  const PeriodicGraph u0 = profile_param(p);
  const double t = p.non_negative("t", 0.1);
  const double dt = p.positive("dt", 1e-5);
  const PeriodicGraph u = evolve_graph(u0, dt, t);
  for (const auto& [rel, prof] : {std::pair{"tables/profile_initial.csv", &u0}, std::pair{"tables/profile_final.csv", &u}}) {
    auto os = run.open(rel);
    os << "x,u\n";
    write_profile_csv(os, *prof);
  }
  const auto sup = [](const PeriodicGraph& g) {
    double m = 0.0;
    for (const double v : g.values) m = std::max(m, std::abs(v));
    return m;
  };
  json report{{"t", t}, {"samples", u0.size()}, {"dt", dt}, {"max_abs_u0", sup(u0)}, {"max_abs_u", sup(u)}};
  run.say("max |u| " + format_double(sup(u0)) + " -> " + format_double(sup(u)));
  if (p.flag("crosscheck", false) && t > 0.0) {
    const GreatCircle g(p.point("pole", SpherePoint(0, 0, 1)));
    const auto cc = crosscheck(u0, g, t, dt, p.positive("flow_dt", 1e-4));
    report["crosscheck_gap"] = cc.gap;
    run.say("graph vs parametric Hausdorff gap " + format_double(cc.gap));
  }
  return report;
}

// ---- verify ----------------------------------------------------------------

json cmd_verify(Run& run, const Params& p, const std::vector<std::string>& cli_checks, int& code) {
  p.only({"checks"});
  std::vector<std::string> selection{"all"};
  if (p.has("checks")) {
    const json cj = p.get("checks");
    if (!cj.is_array()) config_error(p.field("checks") + ": expected a list of check names");
    selection.clear();
    for (const auto& c : cj) {
      if (!c.is_string()) config_error(p.field("checks") + ": expected a list of check names");
      selection.push_back(c.get<std::string>());
    }
  }
  if (!cli_checks.empty()) selection = cli_checks;
  const auto results = run_suite(selection);

  json checks = json::array();
  json timings = json::object();
  std::vector<std::vector<std::string>> rows;
  std::size_t passed = 0;
  for (const auto& r : results) {
    json j = to_json(r);
    j.erase("seconds");  // timings live in the manifest so the report stays reproducible
    checks.push_back(std::move(j));
    timings[r.name] = r.seconds;
    rows.push_back({std::to_string(r.id), r.name, cell(r.pass), cell(r.measured), cell(r.tolerance)});
    passed += r.pass ? 1 : 0;
    char id[8];
    std::snprintf(id, sizeof id, "C%02d", r.id);
    run.say(std::string(r.pass ? "[PASS] " : "[FAIL] ") + id + " " + r.name + " measured=" + format_double(r.measured) +
            " tol=" + format_double(r.tolerance));
  }
  run.write_csv("tables/verify.csv", "id,name,pass,measured,tolerance", rows);
  run.manifest_extra["check_seconds"] = timings;
  if (passed != results.size()) code = 1;
  return {{"checks", checks}, {"passed", passed}, {"failed", results.size() - passed}};
}

// ---- driver ----------------------------------------------------------------

const std::map<std::string, std::string>& kinds() {
  static const std::map<std::string, std::string> k = {
      {"simulate", "Simulate"},   {"multiplicity", "Multiplicity"}, {"spacing", "Spacing"}, {"straighten", "Straighten"},
      {"levelset", "Levelset"},   {"graphflow", "GraphFlow"},       {"verify", "Verify"},
  };
  return k;
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "jsonl";
  bool quiet = false;
  std::vector<std::string> checks;
};

int execute(const std::string& sub, const Options& opt) {
  Run run;
  run.kind = kinds().at(sub);
  run.quiet = opt.quiet;
  run.jsonl = opt.format == "jsonl";
  json cfg = json::object();
  try {
    if (!opt.config.empty()) cfg = load_json_file(opt.config);
    if (!cfg.is_object()) config_error("config: expected a JSON object");
    const Params top(cfg, "config");
    top.only({"name", "kind", "seed", "output_dir", "parameters"});
    if (top.has("kind") && top.text("kind", "") != run.kind) {
      config_error("config.kind: '" + top.text("kind", "") + "' does not match subcommand " + sub);
    }
    run.name = top.text("name", sub);
    if (run.name.empty() || run.name.find('/') != std::string::npos || run.name == "." || run.name == "..") {
      config_error("config.name: must be a plain, non-empty directory name");
    }
    if (top.has("seed") && !cfg["seed"].is_number_unsigned()) config_error("config.seed: expected a non-negative integer");
    run.seed = opt.seed ? *opt.seed : cfg.value("seed", std::uint64_t{1});
    const std::string out = !opt.out.empty() ? opt.out : top.text("output_dir", "out");
    run.dir = fs::path(out) / run.name;
    run.config = cfg;
    run.config["kind"] = run.kind;
    run.config["name"] = run.name;
    run.config["seed"] = run.seed;
    run.config["output_dir"] = out;
    const Params params(top.get("parameters"), "parameters");

    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    json report;
    try {
      fs::create_directories(run.dir);
      if (sub == "simulate") report = cmd_simulate(run, params);
      else if (sub == "multiplicity") report = cmd_multiplicity(run, params);
      else if (sub == "spacing") report = cmd_spacing(run, params);
      else if (sub == "straighten") report = cmd_straighten(run, params);
      else if (sub == "levelset") report = cmd_levelset(run, params);
      else if (sub == "graphflow") report = cmd_graphflow(run, params);
      else report = cmd_verify(run, params, opt.checks, code);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigInvalid) throw;
      report = {{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
      code = 1;
      std::cerr << "sphcsf " << sub << ": " << e.what() << '\n';
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.write_json("report.json", report);
    json manifest{{"tool", "sphcsf"},          {"version", tool_version}, {"compiler", __VERSION__},
                  {"cxx_standard", __cplusplus}, {"config", run.config},   {"wall_time_s", wall},
                  {"exit_code", code}};
    for (auto it = run.manifest_extra.begin(); it != run.manifest_extra.end(); ++it) manifest[it.key()] = it.value();
    manifest["outputs"] = run.outputs;  // written last so it lists report.json too
    std::ofstream(run.dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    run.say("wrote " + run.dir.string());
    return code;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ConfigInvalid) throw;
    std::cerr << "sphcsf " << sub << ": " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "sphcsf " << sub << ": ConfigInvalid: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve shortening flow on the sphere: simulations, diagnostics and checks"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);
  Options opt;
  std::string seed_text;

  const std::map<std::string, std::string> help = {
      {"simulate", "evolve a curve and write its trajectory"},
      {"multiplicity", "sup of band multiplicity over great circles"},
      {"spacing", "construct and verify a (C, theta) spacing"},
      {"straighten", "C1 straightening of a leafable curve"},
      {"levelset", "level-set sandwich, annulus area and long-time classification"},
      {"graphflow", "graph solver over a great circle"},
      {"verify", "run the numbered acceptance checks"},
  };
  for (const auto& [name, text] : help) {
    auto* sc = app.add_subcommand(name, text);
    sc->add_option("--config", opt.config, "scenario config (JSON)")->check(CLI::ExistingFile);
    sc->add_option("--out", opt.out, "output root (overrides config output_dir)");
    sc->add_option("--seed", seed_text, "64-bit seed (overrides config seed)");
    sc->add_option("--format", opt.format, "trajectory format")->check(CLI::IsMember({"csv", "jsonl"}));
    sc->add_flag("--quiet", opt.quiet, "no progress output");
    if (name == "verify") sc->add_option("checks", opt.checks, "check names, or 'all'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!seed_text.empty()) {
    try {
      std::size_t used = 0;
      opt.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size() || seed_text[0] == '-') throw std::invalid_argument(seed_text);
    } catch (const std::exception&) {
      std::cerr << "sphcsf: ConfigInvalid: --seed: expected an unsigned 64-bit integer\n";
      return 2;
    }
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return execute(sub, opt);
  } catch (const std::exception& e) {
    std::cerr << "sphcsf " << sub << ": " << e.what() << '\n';
    return 1;
  }
}
