#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/sheet_point.hpp"

namespace toboggan {

enum class ContourKind { Toboggan, Straight, HalfLine, AntiStokes, Image };

struct ContourSample {
  double t = 0.0;
  SheetPoint point;
};

/// A sampled path on the covering of the punctured plane.
///
/// Samples are ordered by the parameter t, from the "in" end to the "out"
/// end. Consecutive samples are joined by straight chords which never pass
/// through the origin; the solvers only need the homotopy class, so the
/// sampling defines geometry and not accuracy.
struct Contour {
  ContourKind kind = ContourKind::Toboggan;
  int winding = 0;
  double offset = 1.0;
  double truncation_radius = 8.0;
  int wedge_in = 1;
  int wedge_out = 0;
  std::size_t vertex = 0;  ///< index of the matching point (phi = -pi/2 for spirals)
  std::vector<ContourSample> samples;

  const SheetPoint& front() const { return samples.front().point; }
  const SheetPoint& back() const { return samples.back().point; }
  const SheetPoint& vertex_point() const { return samples.at(vertex).point; }
  std::size_t size() const { return samples.size(); }
};

/// Physical sector of the Gaussian e^{-x^2/2}: k*pi + theta in (-pi/4, pi/4).
inline bool in_physical_wedge(double theta, int k) {
  const double s = k * pi + theta;
  return s > -pi / 4 && s < pi / 4;
}

/// Radial profile of the tobogganic spiral, sqrt(1 + tan^2((phi + pi/2)/(2N+1))).
inline double spiral_radius(double phi, int N) {
  const double c = std::cos((phi + pi / 2) / (2 * N + 1));
  return 1.0 / std::abs(c);
}

namespace detail {

inline void check_contour_args(double eps, double r_max) {
  if (!(eps > 0.0)) throw InvalidArgument("contour offset epsilon must be positive");
  if (!(r_max > eps)) throw InvalidArgument("truncation radius must exceed epsilon (empty contour)");
}

inline void check_end_wedges(const Contour& c) {
  if (!in_physical_wedge(c.front().argument, c.wedge_in) ||
      !in_physical_wedge(c.back().argument, c.wedge_out)) {
    throw InvalidArgument(
        "truncated contour ends leave the physical wedges; increase the truncation radius or "
        "decrease epsilon");
  }
}

}  // namespace detail

/// Tobogganic spiral x(phi) = eps * rho(phi, N) * exp(i phi), truncated at |x| = r_max.
///
/// The parameter t is the angle offset delta = phi + pi/2 from the vertex; the
/// grid in delta is symmetric, so the vertex is sample `vertex` and the PT
/// image of every sample is again a sample.
inline Contour make_toboggan(int N, double eps, double r_max = 8.0, int samples_per_turn = 512) {
  if (N < 0) throw InvalidArgument("winding number must be nonnegative");
  if (samples_per_turn < 16) throw InvalidArgument("samples_per_turn must be at least 16");
  detail::check_contour_args(eps, r_max);

  const double delta_max = (2 * N + 1) * std::acos(eps / r_max);
  const double h_target = 2.0 * pi / samples_per_turn;
  const int m = std::max(1, static_cast<int>(std::ceil(delta_max / h_target)));
  const double h = delta_max / m;

  Contour c;
  c.kind = ContourKind::Toboggan;
  c.winding = N;
  c.offset = eps;
  c.truncation_radius = r_max;
  c.wedge_in = N + 1;
  c.wedge_out = -N;
  c.samples.reserve(2 * m + 1);
  for (int j = -m; j <= m; ++j) {
    const double delta = j == m ? delta_max : (j == -m ? -delta_max : j * h);
    const double phi = delta - pi / 2;
    double mod = eps * spiral_radius(phi, N);
    if (std::abs(j) == m) mod = r_max;
    c.samples.push_back({delta, SheetPoint(mod, phi)});
  }
  c.vertex = static_cast<std::size_t>(m);
  detail::check_end_wedges(c);
  return c;
}

/// The straight line x = t - i*eps, |x| <= r_max, with unwound arguments in
/// (-pi, 0) continued from the vertex.
inline Contour make_straight(double eps, double r_max = 8.0, int n_samples = 513) {
  detail::check_contour_args(eps, r_max);
  if (n_samples < 3) throw InvalidArgument("straight contour needs at least 3 samples");
  const int m = n_samples / 2;
  const double T = std::sqrt(r_max * r_max - eps * eps);

  Contour c;
  c.kind = ContourKind::Straight;
  c.winding = 0;
  c.offset = eps;
  c.truncation_radius = r_max;
  c.wedge_in = 1;
  c.wedge_out = 0;
  for (int j = -m; j <= m; ++j) {
    const double t = T * j / m;
    c.samples.push_back({t, SheetPoint(std::hypot(t, eps), -pi / 2 + std::atan(t / eps))});
  }
  c.vertex = static_cast<std::size_t>(m);
  detail::check_end_wedges(c);
  return c;
}

/// Positive real half-line [r_min, r_max] for the textbook radial problem;
/// the matching point is the sample closest to `match_at`.
inline Contour make_half_line(double r_min, double r_max = 8.0, int n_samples = 257,
                              double match_at = 1.0) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw InvalidArgument("half-line needs 0 < r_min < r_max");
  if (n_samples < 3) throw InvalidArgument("half-line needs at least 3 samples");
  Contour c;
  c.kind = ContourKind::HalfLine;
  c.winding = 0;
  c.offset = 0.0;
  c.truncation_radius = r_max;
  c.wedge_in = 0;
  c.wedge_out = 0;
  // geometric spacing near the origin, where the centrifugal term varies fastest
  const double ratio = std::log(r_max / r_min);
  double best = 1e300;
  for (int j = 0; j < n_samples; ++j) {
    const double r = r_min * std::exp(ratio * j / (n_samples - 1));
    c.samples.push_back({r, SheetPoint(j == n_samples - 1 ? r_max : r, 0.0)});
    if (std::abs(r - match_at) < best) {
      best = std::abs(r - match_at);
      c.vertex = static_cast<std::size_t>(j);
    }
  }
  return c;
}

/// PT reflection (ρ, φ) -> (ρ, -π - φ), x -> -conj(x).
///
/// Sample order is reversed (t -> -t) so the reflected path still runs from
/// the in wedge to the out wedge; for spirals from make_toboggan the result
/// coincides with the input sample set.
inline Contour pt_reflect(const Contour& c) {
  Contour r = c;
  const std::size_t n = c.samples.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = c.samples[n - 1 - j];
    r.samples[j] = {-s.t, s.point.pt_image()};
  }
  r.vertex = n - 1 - c.vertex;
  // the image of the out end becomes the in end: k*pi + (-pi - theta) = -(k_out*pi + theta)
  r.wedge_in = 1 - c.wedge_out;
  r.wedge_out = 1 - c.wedge_in;
  return r;
}

enum class Rotation { Plus, Minus };

/// Conjugate partner of a spiral: eps -> eps * exp(+-i*pi), realized as a
/// rigid rotation of every unwound argument by +-pi.
inline Contour conjugate_toboggan(const Contour& c, Rotation dir) {
  const double angle = dir == Rotation::Plus ? pi : -pi;
  Contour r = c;
  for (auto& s : r.samples) s.point = s.point.rotated(angle);
  const int dk = dir == Rotation::Plus ? -1 : 1;
  r.wedge_in += dk;
  r.wedge_out += dk;
  return r;
}

/// Largest distance from a sample of `a` to the nearest sample of `b`; the
/// metric adds the sheet offset (argument difference times modulus) to the
/// embedded distance, so equal values on different sheets do not match.
inline double sample_set_distance(const Contour& a, const Contour& b) {
  double worst = 0.0;
  for (const auto& sa : a.samples) {
    double best = 1e300;
    for (const auto& sb : b.samples) {
      const double d = std::abs(sa.point.value() - sb.point.value()) +
                       std::abs(sa.point.argument - sb.point.argument) * sa.point.modulus;
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

/// Total swept argument of the sampled contour.
inline double argument_span(const Contour& c) {
  auto [lo, hi] = std::minmax_element(c.samples.begin(), c.samples.end(), [](auto& x, auto& y) {
    return x.point.argument < y.point.argument;
  });
  return hi->point.argument - lo->point.argument;
}

// --- anti-Stokes scattering contours ---------------------------------------

enum class Edge { Lower, Upper };

inline std::string to_string(Edge e) { return e == Edge::Lower ? "lower" : "upper"; }

/// Asymptotic ray angles of the anti-Stokes contours A^(N)_L and A^(N)_U.
struct RayAngles {
  double in;
  double out;
};

inline RayAngles anti_stokes_angles(int N, Edge branch) {
  if (branch == Edge::Lower) return {-(N + 0.75) * pi, (N - 0.25) * pi};
  return {-(N + 1.25) * pi, (N + 0.25) * pi};
}

struct AntiStokesContour {
  int winding = 0;
  Edge branch = Edge::Lower;
  double theta_in = 0.0;
  double theta_out = 0.0;
  double join_radius = 2.0;
  Contour path;                     ///< in ray (inward), interior arc, out ray (outward)
  std::size_t in_ray_end = 0;       ///< samples [0, in_ray_end) lie on the in ray
  std::size_t out_ray_begin = 0;    ///< samples [out_ray_begin, size) lie on the out ray
};

/// Anti-Stokes contour: two straight rays at the exact asymptotic angles,
/// joined at |x| = join_radius by an arc of the spiral family
/// eps * sec(kappa * delta) * exp(i*phi) centered on the vertex phi = -pi/2.
///
/// `ray_radii` are extra radii (both rays) that must appear as samples, e.g.
/// a least-squares extraction window.
inline AntiStokesContour make_anti_stokes(int N, Edge branch, double r_max = 30.0,
                                          const std::vector<double>& ray_radii = {},
                                          double eps = 1.0, double join_radius = 2.0,
                                          int samples_per_turn = 512, int ray_samples = 128) {
  if (N < 0) throw InvalidArgument("winding number must be nonnegative");
  if (!(eps > 0.0) || !(join_radius > eps) || !(r_max > join_radius))
    throw InvalidArgument("anti-Stokes contour needs 0 < eps < join_radius < r_max");

  const auto [th_in, th_out] = anti_stokes_angles(N, branch);
  AntiStokesContour a;
  a.winding = N;
  a.branch = branch;
  a.theta_in = th_in;
  a.theta_out = th_out;
  a.join_radius = join_radius;

  std::vector<double> radii;
  for (int j = 1; j <= ray_samples; ++j)
    radii.push_back(join_radius + (r_max - join_radius) * j / ray_samples);
  for (double r : ray_radii) {
    if (r > join_radius && r <= r_max) radii.push_back(r);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12 * y; }),
              radii.end());

  const double half_span = 0.5 * (th_out - th_in);
  const double kappa = std::acos(eps / join_radius) / half_span;
  const int m = std::max(
      4, static_cast<int>(std::ceil(half_span / (2.0 * pi / samples_per_turn))));

  Contour& c = a.path;
  c.kind = ContourKind::AntiStokes;
  c.winding = N;
  c.offset = eps;
  c.truncation_radius = r_max;
  c.wedge_in = 0;
  c.wedge_out = 0;

  for (auto it = radii.rbegin(); it != radii.rend(); ++it)
    c.samples.push_back({-half_span - (*it - join_radius), SheetPoint(*it, th_in)});
  a.in_ray_end = c.samples.size();
  for (int j = -m; j <= m; ++j) {
    const double delta = half_span * j / m;
    const double mod = std::abs(j) == m ? join_radius : eps / std::cos(kappa * delta);
    const double phi = std::abs(j) == m ? (j < 0 ? th_in : th_out) : delta - pi / 2;
    c.samples.push_back({delta, SheetPoint(mod, phi)});
  }
  c.vertex = a.in_ray_end + static_cast<std::size_t>(m);
  a.out_ray_begin = c.samples.size();
  for (double r : radii) c.samples.push_back({half_span + (r - join_radius), SheetPoint(r, th_out)});
  return a;
}

/// PT reflection of an anti-Stokes contour; the rays swap roles, so with
/// reversed ordering the contour maps onto itself.
inline AntiStokesContour pt_reflect(const AntiStokesContour& a) {
  AntiStokesContour r = a;
  r.path = pt_reflect(a.path);
  r.theta_in = -pi - a.theta_out;
  r.theta_out = -pi - a.theta_in;
  const std::size_t n = a.path.size();
  r.in_ray_end = n - a.out_ray_begin;
  r.out_ray_begin = n - a.in_ray_end;
  return r;
}

}  // namespace toboggan
