#pragma once

// JSON conversions for reports, configs and trajectories. Needs nlohmann/json (json.hpp) on the include path.

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sphcsf/curve.hpp"
#include "sphcsf/curve_io.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/jordan.hpp"
#include "sphcsf/levelset.hpp"
#include "sphcsf/verify.hpp"

namespace sphcsf {

using json = nlohmann::json;

inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
inline json to_json(const SpherePoint& p) { return to_json(p.vec()); }

inline json to_json(const CurveDiagnostics& d, bool closed) {
  json j;
  j["length"] = d.length;
  j["total_curvature"] = d.total_curvature;
  j["bending"] = d.bending;
  j["area"] = closed ? json(d.enclosed_area) : json(nullptr);
  return j;
}

/// One trajectory line: {"t", "length", "total_curvature", "bending", "area"[, "nodes"]}.
template <SphereCurve Curve>
json snapshot_line(const Snapshot<Curve>& s, bool with_nodes) {
  json j;
  j["t"] = s.t;
  const json d = to_json(s.diag, Curve::is_closed);
  for (auto it = d.begin(); it != d.end(); ++it) j[it.key()] = it.value();
  if (with_nodes && s.curve) {
    json nodes = json::array();
    for (const auto& p : s.curve->nodes()) nodes.push_back(to_json(p));
    j["nodes"] = std::move(nodes);
  }
  return j;
}

inline json to_json(const MultiplicityReport& m) {
  json comps = json::array();
  for (const auto& [a, b] : m.components) comps.push_back(json::array({a, b}));
  return {{"pole", to_json(m.circle.pole())}, {"r", m.r}, {"count", m.count}, {"components", comps}};
}

inline json to_json(const Spacing& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  return {{"points", pts}, {"C", s.C}, {"theta", s.theta}};
}

inline Vec3 vec_from_json(const json& j, std::string_view field) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ConfigInvalid, std::string(field) + ": expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Spacing spacing_from_json(const json& j) {
  Spacing s;
  for (const auto& p : j.at("points")) s.points.emplace_back(vec_from_json(p, "points"));
  s.C = j.at("C").get<double>();
  s.theta = j.at("theta").get<double>();
  return s;
}

inline json to_json(const SandwichResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"n", row.n}, {"eps", row.eps}, {"ok", row.ok}};
    j["gap"] = row.ok ? json(row.gap) : json(nullptr);
    j["area"] = row.ok ? json(row.area) : json(nullptr);
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(std::move(j));
  }
  return {{"t", r.t}, {"levels", rows}, {"verdict", std::string(to_string(r.verdict))}};
}

inline json to_json(const LongTermReport& r) {
  json j{{"verdict", std::string(to_string(r.verdict))}, {"A", r.A}, {"consistent", r.consistent}};
  j["event_time"] = r.event_time ? json(*r.event_time) : json(nullptr);
  j["final_area"] = r.area.empty() ? json(nullptr) : json(r.area.back().second);
  j["final_bending"] = r.final_bending < 1e299 ? json(r.final_bending) : json(nullptr);
  return j;
}

inline json to_json(const CheckResult& r) {
  return {{"id", r.id},           {"name", r.name},     {"pass", r.pass},      {"measured", r.measured},
          {"tolerance", r.tolerance}, {"detail", r.detail}, {"seconds", r.seconds}};
}

/// Reads a flow configuration; missing fields keep their defaults. Unknown keys are ignored.
/// `prefix` is prepended to field names in error messages.
inline FlowConfig flow_config_from_json(const json& j, const std::string& prefix = "flow.") {
  FlowConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "flow settings: expected an object");
  const auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw Error(ErrorKind::ConfigInvalid, prefix + key + ": expected a number");
    out = j[key].get<double>();
  };
  const auto count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
      throw Error(ErrorKind::ConfigInvalid, prefix + key + ": expected a non-negative integer");
    }
    out = j[key].get<std::size_t>();
  };
  num("dt", cfg.dt);
  count("remesh_every", cfg.remesh_every);
  count("target_nodes", cfg.target_nodes);
  num("extinction_length", cfg.extinction_length);
  num("max_time", cfg.max_time);
  num("snapshot_interval", cfg.snapshot_interval);
  try {
    cfg.validate();
  } catch (const Error& e) {
    // what() reads "ConfigInvalid: <field>: <why>"
    const std::string msg = e.what();
    throw Error(ErrorKind::ConfigInvalid, prefix + msg.substr(msg.find(": ") + 2));
  }
  return cfg;
}

/// Builds a curve from {"type": ...}. Types: Circle, PerturbedLatitude, LeafableWiggle, KochLike,
/// DirichletGamma, File.
inline AnyCurve curve_from_json(const json& j, std::uint64_t seed) {
  if (!j.is_object() || !j.contains("type")) throw Error(ErrorKind::ConfigInvalid, "curve.type: missing");
  const std::string type = j.at("type").get<std::string>();
  const auto get = [&](const char* key, double fallback) { return j.contains(key) ? j[key].get<double>() : fallback; };
  const auto nodes = [&](std::size_t fallback) {
    return j.contains("nodes") ? j["nodes"].get<std::size_t>() : fallback;
  };
  const SpherePoint pole = j.contains("pole") ? SpherePoint(vec_from_json(j["pole"], "curve.pole")) : SpherePoint(0, 0, 1);
  try {
    if (type == "Circle") return make_circle(get("r0", pi / 3.0), pole, nodes(512));
    if (type == "PerturbedLatitude") {
      return make_perturbed_latitude(get("r0", 1.0), get("amplitude", 0.05), static_cast<int>(get("mode", 3)), pole,
                                     nodes(512), get("phase", 0.0));
    }
    if (type == "LeafableWiggle") {
      WiggleParams p;
      p.r = get("r", p.r);
      p.C = get("C", p.C);
      p.alpha = get("alpha", p.alpha);
      p.seed = seed;
      p.nodes = nodes(p.nodes);
      return make_leafable_wiggle(GreatCircle(pole), GreatCircle(pole).point_at(0.0), p).curve;
    }
    if (type == "KochLike") {
      return make_koch(static_cast<int>(get("depth", 2)), get("base_radius", 0.8),
                       static_cast<std::size_t>(get("base_edges", 12)), pole);
    }
    if (type == "DirichletGamma") {
      const GreatCircle g(pole);
      return make_dirichlet_arc(g, g.point_at(0.0), get("r", 0.05), get("C", 1.0), get("alpha", 0.2), nodes(512)).arc;
    }
    if (type == "File") return load_curve(j.at("path").get<std::string>());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParamDomain) throw Error(ErrorKind::ConfigInvalid, "curve: " + std::string(e.what()));
    throw;
  }
  throw Error(ErrorKind::ConfigInvalid, "curve.type: unknown curve type '" + type + "'");
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("config: ") + e.what());
  }
}

}  // namespace sphcsf
