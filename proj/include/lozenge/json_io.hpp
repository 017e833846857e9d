#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"
#include "lozenge/rational.hpp"

namespace lozenge {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw Error(ErrorKind::invalid_argument, "expected rational as integer or \"p/q\" string");
}

inline Json rational_to_json(const Rational& r) {
  if (r.is_integer()) return Json(r.num);
  return Json(r.str());
}

// Domain file: { "n": int, "vertices": [[x,t],...] }, counterclockwise,
// closed implicitly. Coordinates are integers or "p/q" strings.
inline PolygonalDomain domain_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("vertices"))
    throw Error(ErrorKind::invalid_argument, "domain json needs \"n\" and \"vertices\"");
  long long n = j.at("n").get<long long>();
  if (n <= 0) throw Error(ErrorKind::invalid_argument, "grid parameter n must be positive");
  std::vector<Vertex> verts;
  for (const auto& pv : j.at("vertices")) {
    if (!pv.is_array() || pv.size() != 2)
      throw Error(ErrorKind::invalid_argument, "vertex must be [x,t]");
    verts.push_back({rational_from_json(pv[0]), rational_from_json(pv[1])});
  }
  return PolygonalDomain::from_vertices(n, verts);
}

inline Json domain_to_json(const PolygonalDomain& d) {
  Json j;
  j["n"] = d.n();
  Json vs = Json::array();
  for (const auto& v : d.vertices())
    vs.push_back(Json::array({rational_to_json(v.x), rational_to_json(v.t)}));
  j["vertices"] = vs;
  return j;
}

inline PolygonalDomain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("bad json: ") + e.what());
  }
  return domain_from_json(j);
}

// Configurations serialize as { "t": rational, "positions": [rational,...] }.
inline Json config_to_json(const ParticleConfig& c) {
  Json j;
  j["t"] = Rational(c.t, c.n).str();
  Json pos = Json::array();
  for (long long x : c.sites) pos.push_back(Rational(x, c.n).str());
  j["positions"] = pos;
  return j;
}

inline ParticleConfig config_from_json(const Json& j, long long n) {
  ParticleConfig c;
  c.n = n;
  c.t = rational_from_json(j.at("t")).lattice(n);
  for (const auto& pv : j.at("positions")) c.sites.push_back(rational_from_json(pv).lattice(n));
  return c;
}

}  // namespace lozenge
