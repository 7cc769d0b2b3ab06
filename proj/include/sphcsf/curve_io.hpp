#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"

namespace sphcsf {

using AnyCurve = std::variant<ClosedSphereCurve, SphereArc>;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <SphereCurve Curve>
void write_curve_csv(std::ostream& os, const Curve& c) {
  os << (Curve::is_closed ? "# closed\n" : "# arc\n");
  for (const auto& p : c.nodes()) {
    os << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z) << '\n';
  }
}

inline AnyCurve read_curve_csv(std::istream& is) {
  std::string line;
  int kind = -1;  // 1 closed, 0 arc
  std::vector<Vec3> nodes;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      if (line.find("closed") != std::string::npos) kind = 1;
      else if (line.find("arc") != std::string::npos) kind = 0;
      continue;
    }
    std::istringstream ls(line);
    double v[3];
    char sep = 0;
    for (int k = 0; k < 3; ++k) {
      if (!(ls >> v[k])) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected x,y,z");
      if (k < 2 && !(ls >> sep && sep == ',')) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected comma separator");
      }
    }
    nodes.push_back({v[0], v[1], v[2]});
  }
  if (kind < 0) throw Error(ErrorKind::ParseError, "missing '# closed' or '# arc' header");
  if (kind == 1) return ClosedSphereCurve(std::move(nodes));
  return SphereArc(std::move(nodes));
}

inline AnyCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open curve file " + path);
  return read_curve_csv(in);
}

}  // namespace sphcsf
