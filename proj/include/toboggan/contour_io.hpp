#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "toboggan/potential_config.hpp"
#include "toboggan/riemann_path.hpp"

namespace toboggan {

inline std::string to_string(ContourKind k) {
  switch (k) {
    case ContourKind::Toboggan: return "toboggan";
    case ContourKind::Straight: return "straight";
    case ContourKind::HalfLine: return "half-line";
    case ContourKind::AntiStokes: return "anti-stokes";
    case ContourKind::Image: return "image";
  }
  return "unknown";
}

/// Columns t, modulus, argument, re, im; one row per sample.
inline void write_contour_csv(std::ostream& os, const Contour& c) {
  os << "t,modulus,argument,re,im\n";
  for (const auto& s : c.samples) {
    const cplx x = s.point.value();
    os << format_double(s.t) << ',' << format_double(s.point.modulus) << ',' << format_double(s.point.argument)
       << ',' << format_double(x.real()) << ',' << format_double(x.imag()) << '\n';
  }
}

inline nlohmann::json contour_json(const Contour& c) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = to_string(c.kind);
  j["N"] = c.winding;
  j["eps"] = c.offset;
  j["R_max"] = c.truncation_radius;
  j["wedges"] = {{"in", c.wedge_in}, {"out", c.wedge_out}};
  j["vertex"] = c.vertex;
  auto& s = j["samples"] = nlohmann::json::array();
  for (const auto& p : c.samples) {
    const cplx x = p.point.value();
    s.push_back({{"t", p.t}, {"modulus", p.point.modulus}, {"argument", p.point.argument}, {"re", x.real()},
                 {"im", x.imag()}});
  }
  return j;
}

}  // namespace toboggan
