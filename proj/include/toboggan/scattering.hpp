#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "toboggan/errors.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/propagate.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/specfun.hpp"

namespace toboggan {

struct ScatterProblem {
  double alpha = 0.3;
  double energy = 2.2;  ///< E = 2 mu
  int winding = 0;
  Edge branch = Edge::Lower;
  double extraction_radius = 6.0;  ///< |x| at the inner edge of the fit window; outer edge 1.5x

  double mu() const { return energy / 2.0; }
};

/// Coefficients of psi ~ c_+ w_+ + c_- w_- on one ray, with
/// w_+- = exp(+-i r/2) |r|^{+-mu/2 - 1/4}; equivalently r^{1/4} psi projected
/// on exp(+-i r/2) |r|^{+-mu/2}.
struct RayCoefficients {
  cplx plus;
  cplx minus;
};

struct ScatterResult {
  cplx backward;  ///< B: e^{-ir/2}-type coefficient on the in ray (incident e^{ir/2} has unit weight)
  cplx forward;   ///< F: out-ray e^{ir/2}-type coefficient minus one
  RayCoefficients in;
  RayCoefficients out;
  double conditioning = 1.0;
  bool untrusted = false;
  bool resonance = false;
  double resonance_proximity = 1.0;  ///< |1/Gamma((1 - alpha + mu)/2)|
  double distortion_exponent = 0.0;  ///< fitted d log|r^{1/4} psi| / d log r on the out ray (numerical only)
};

/// r with x^2 = -i r; requires arg x = +-pi/4 (mod pi).
inline double radial_variable(const SheetPoint& p, double tol = 1e-9) {
  const double two_theta = principal_angle(2.0 * p.argument);
  if (std::abs(std::abs(two_theta) - pi / 2) > tol)
    throw InvalidArgument("point does not lie on an anti-Stokes ray (arg x = +-pi/4 mod pi)");
  return -std::sin(two_theta) * p.modulus * p.modulus;
}

/// chi = r^{1/4 + alpha/2} e^{ir/2} M((alpha + 1 - mu)/2, alpha + 1; -ir).
/// Negative r is reached along the lower-edge contour through x = -i, so it
/// carries arg r = -pi; chi(r) = e^{i pi (1/4 + alpha/2)/2} x^{1/2 + alpha} e^{-x^2/2} M(..., x^2).
inline cplx chi_solution(double alpha_signed, double mu, double r, const SeriesControl& ctl = {}) {
  const cplx b = 1.0 + alpha_signed;
  if (detail::is_nonpositive_integer(b)) throw SingularityError("1F1 parameter alpha + 1 is a nonpositive integer");
  const cplx a = (alpha_signed + 1.0 - mu) / 2.0;
  const double p = 0.25 + alpha_signed / 2.0;
  if (r == 0.0) return p > 0.0 ? cplx{} : throw SingularityError("chi at r = 0 with negative power");
  const double arg_r = r > 0.0 ? 0.0 : -pi;
  const cplx rp = std::polar(std::pow(std::abs(r), p), p * arg_r);
  return rp * std::polar(1.0, r / 2.0) * kummer_m(a, b, cplx(0.0, -r), ctl);
}

/// psi_(alpha)(x) = x^{1/2 + alpha} e^{-x^2/2} M((1 + alpha - mu)/2, 1 + alpha; x^2), sheet aware.
inline cplx spiked_solution(double alpha_signed, double mu, const SheetPoint& p, const SeriesControl& ctl = {}) {
  const cplx x = p.value();
  const cplx z = x * x;
  return p.pow(0.5 + alpha_signed) * std::exp(-0.5 * z) *
         kummer_m((1.0 + alpha_signed - mu) / 2.0, 1.0 + alpha_signed, z, ctl);
}

/// Resonance energies E = 2 mu_k with mu_k = alpha - 1 - 2k > 0.
inline std::vector<double> resonance_energies(double alpha, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double mu = alpha - 1.0 - 2.0 * k;
    if (!(mu > 0.0)) break;
    out.push_back(2.0 * mu);
  }
  return out;
}

namespace detail {

inline void check_generic_alpha(double alpha) {
  if (std::abs(alpha - std::round(alpha)) < 1e-8)
    throw InvalidArgument("integer alpha is a degenerate (logarithmic) case");
}

/// Leading asymptotic coefficients of psi_(alpha) on a ray of sheet angle
/// theta: psi ~ K_+ w_+ + K_- w_-.
inline RayCoefficients asymptotic_coefficients(double alpha_signed, double mu, double theta) {
  const cplx i{0.0, 1.0};
  const cplx b = 1.0 + alpha_signed;
  const cplx a = (1.0 + alpha_signed - mu) / 2.0;
  const double argz = principal_angle(2.0 * theta);
  const double sgn = argz >= 0.0 ? 1.0 : -1.0;
  const cplx gb = gamma(b);
  const double sheet = theta * (0.5 + alpha_signed);
  const cplx kp = gb * reciprocal_gamma(b - a) * std::exp(i * (sgn * pi * a - a * argz + sheet));
  const cplx km = gb * reciprocal_gamma(a) * std::exp(i * ((a - b) * argz + sheet));
  return {kp, km};
}

/// Solves p1 u1 + p2 u2 with out.minus = 0 and in.plus = 1.
inline ScatterResult combine(const std::array<RayCoefficients, 2>& in, const std::array<RayCoefficients, 2>& out) {
  Eigen::Matrix2cd m;
  m << out[0].minus, out[1].minus, in[0].plus, in[1].plus;
  const Eigen::Vector2cd rhs(0.0, 1.0);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  const auto& sv = svd.singularValues();
  ScatterResult r;
  r.conditioning = sv(1) > 0.0 ? sv(0) / sv(1) : INFINITY;
  const Eigen::Vector2cd p = m.fullPivLu().solve(rhs);
  r.in = {p(0) * in[0].plus + p(1) * in[1].plus, p(0) * in[0].minus + p(1) * in[1].minus};
  r.out = {p(0) * out[0].plus + p(1) * out[1].plus, p(0) * out[0].minus + p(1) * out[1].minus};
  r.backward = r.in.minus;
  r.forward = r.out.plus - 1.0;
  return r;
}

}  // namespace detail

/// Amplitudes of the solvable spiked oscillator from the Gamma-ratio
/// asymptotics of 1F1 on both rays of the anti-Stokes contour.
inline ScatterResult analytic_amplitudes(const ScatterProblem& prob) {
  detail::check_generic_alpha(prob.alpha);
  const double mu = prob.mu();
  const auto rays = anti_stokes_angles(prob.winding, prob.branch);
  std::array<RayCoefficients, 2> in, out;
  const std::array<double, 2> signs{prob.alpha, -prob.alpha};
  for (int j = 0; j < 2; ++j) {
    in[j] = detail::asymptotic_coefficients(signs[j], mu, rays.in);
    out[j] = detail::asymptotic_coefficients(signs[j], mu, rays.out);
  }
  ScatterResult r = detail::combine(in, out);
  r.resonance_proximity = std::abs(reciprocal_gamma((1.0 - prob.alpha + mu) / 2.0));
  r.resonance = r.resonance_proximity < 1e-12;
  r.untrusted = r.conditioning > 1e8;
  return r;
}

namespace detail {

/// Formal asymptotic solution u = exp(int y) of psi'' = (V - E) psi on a ray,
/// y = sum_k c_k x^{1 - k/q}, c_0 = -1 for the e^{ir/2} wave and +1 for e^{-ir/2}.
/// The x^{-1} coefficient c_{2q} becomes the factor |x|^{c_{2q}}, so that
/// u -> w_+- when no growing corrections (0 < k < 2q) are present.
struct FormalWave {
  long q = 1;
  std::vector<cplx> c;
};

inline FormalWave formal_wave(const PowerLawPotential& v, cplx E, double c0, int orders_per_q = 80) {
  FormalWave w;
  for (const auto& t : v.terms)
    if (t.g != cplx{}) w.q = std::lcm(w.q, t.beta.denominator());
  const long q = w.q;
  const long n = orders_per_q * q;
  std::vector<cplx> src(n + 1, 0.0);
  src[0] = v.harmonic;
  src[2 * q] -= E;
  if (4 * q <= n) src[4 * q] += v.centrifugal();
  for (const auto& t : v.terms) {
    if (t.g == cplx{}) continue;
    const RationalExponent m = RationalExponent(q) * (RationalExponent(2) - t.beta);
    if (!m.is_integer() || m.numerator() < 1) throw InvalidArgument("term does not decay relative to x^2");
    if (m.numerator() <= n) src[m.numerator()] += t.g * std::polar(1.0, t.beta.value() * pi / 2);
  }
  for (const auto& pole : v.poles) {
    // G/(x - a)^2 = G sum_j (j + 1) a^j x^{-j-2}
    cplx aj = 1.0;
    for (long j = 0; q * (j + 4) <= n; ++j, aj *= pole.location) src[q * (j + 4)] += pole.strength * double(j + 1) * aj;
  }
  w.c.assign(n + 1, 0.0);
  w.c[0] = c0;
  for (long m = 1; m <= n; ++m) {
    cplx acc = src[m];
    for (long j = 1; j < m; ++j) acc -= w.c[j] * w.c[m - j];
    if (m >= 2 * q) acc -= w.c[m - 2 * q] * (1.0 - double(m - 2 * q) / q);
    w.c[m] = acc / (2.0 * c0);
  }
  return w;
}

struct WaveValue {
  cplx log_u;
  cplx y;  ///< u'/u
};

/// Evaluates the formal wave at p with the series cut at its smallest term.
inline WaveValue eval_wave(const FormalWave& w, const SheetPoint& p) {
  const long q = w.q;
  const long n = static_cast<long>(w.c.size()) - 1;
  long cut = n;
  double smallest = INFINITY;
  for (long k = 2 * q + 1; k <= n; ++k) {
    if (w.c[k] == cplx{}) continue;
    const double mag = std::abs(w.c[k]) * std::pow(p.modulus, 1.0 - double(k) / q);
    if (mag < smallest) {
      smallest = mag;
      cut = k;
    }
  }
  const cplx x = p.value();
  WaveValue out{w.c[0] * x * x / 2.0 + w.c[2 * q] * std::log(p.modulus), 0.0};
  for (long k = 0; k <= cut; ++k) {
    if (w.c[k] == cplx{}) continue;
    const double e = 1.0 - double(k) / q;
    out.y += w.c[k] * p.pow(e);
    if (k != 2 * q && k != 0) out.log_u += w.c[k] * p.pow(e + 1.0) / (e + 1.0);
  }
  return out;
}

struct RayFit {
  RayCoefficients coeff;
  double conditioning;  ///< amplification of relative data error into the subdominant coefficient
};

/// Projects sampled (psi, psi') on the formal waves point by point and
/// averages over the window.
inline RayFit fit_ray(const std::vector<SheetPoint>& pts, const std::vector<std::array<cplx, 2>>& data,
                      const FormalWave& plus, const FormalWave& minus) {
  if (pts.empty()) throw InvalidArgument("empty extraction window");
  cplx sp{}, sm{};
  double cond = 1.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto up = eval_wave(plus, pts[k]);
    const auto um = eval_wave(minus, pts[k]);
    const cplx psi = data[k][0], dpsi = data[k][1];
    const cplx den = um.y - up.y;
    sp += (psi * um.y - dpsi) / den * std::exp(-up.log_u);
    sm += (dpsi - psi * up.y) / den * std::exp(-um.log_u);
    cond = std::max(cond, std::exp(std::abs(up.log_u.real() - um.log_u.real())));
  }
  const double n = static_cast<double>(pts.size());
  return {{sp / n, sm / n}, cond};
}

/// Slope s of log|r^{1/4} psi| ~ s log r + c + d/r.
inline double fit_distortion(const std::vector<double>& r, const std::vector<cplx>& psi) {
  const int n = static_cast<int>(r.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int k = 0; k < n; ++k) {
    const double ar = std::abs(r[k]);
    a(k, 0) = std::log(ar);
    a(k, 1) = 1.0;
    a(k, 2) = 1.0 / ar;
    b(k) = std::log(std::pow(ar, 0.25) * std::abs(psi[k]));
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

}  // namespace detail

/// Amplitudes from numerical propagation along the anti-Stokes contour and
/// projection on formal asymptotic waves over |x| in [R, 1.5 R],
/// R = extraction_radius, with 64 samples per ray. The subdominant wave is
/// smaller by about |r|^mu, which bounds the useful R from above.
inline ScatterResult numerical_amplitudes(const PowerLawPotential& v, const ScatterProblem& prob,
                                          const StepControl& ctl = {}) {
  if (!v.asymptotically_harmonic() || v.harmonic != 1.0)
    throw InvalidArgument("scattering needs an asymptotically harmonic potential with unit x^2 coefficient");
  const double mu = prob.mu();
  const double r_lo = prob.extraction_radius;
  const double r_hi = 1.5 * prob.extraction_radius;
  constexpr int window = 64;
  std::vector<double> radii;
  for (int k = 0; k < window; ++k) radii.push_back(r_lo + (r_hi - r_lo) * k / (window - 1));
  const double join = std::min(2.0, 0.5 * r_lo);
  const double eps = std::min(1.0, 0.5 * join);
  const auto as = make_anti_stokes(prob.winding, prob.branch, r_hi, radii, eps, join);
  const Contour& c = as.path;

  auto on_window = [&](std::size_t idx) {
    const double m = c.samples[idx].point.modulus;
    return m >= r_lo * (1 - 1e-12) && m <= r_hi * (1 + 1e-12);
  };

  std::array<RayCoefficients, 2> in, out;
  double cond = 1.0;
  std::array<std::vector<std::array<cplx, 2>>, 2> out_records;
  const std::array<std::array<cplx, 2>, 2> starts{{{1.0, 0.0}, {0.0, 1.0}}};
  const auto wave_plus = detail::formal_wave(v, prob.energy, -1.0);
  const auto wave_minus = detail::formal_wave(v, prob.energy, 1.0);
  for (int j = 0; j < 2; ++j) {
    std::vector<std::array<cplx, 2>> rec_in, rec_out;
    transport_linear(v, prob.energy, c, c.vertex, 0, starts[j], ctl, &rec_in);
    transport_linear(v, prob.energy, c, c.vertex, c.size() - 1, starts[j], ctl, &rec_out);
    std::vector<SheetPoint> pts;
    std::vector<std::array<cplx, 2>> dat;
    for (std::size_t k = 0; k < rec_in.size(); ++k) {
      const std::size_t idx = c.vertex - k;
      if (idx < as.in_ray_end && on_window(idx)) {
        pts.push_back(c.samples[idx].point);
        dat.push_back(rec_in[k]);
      }
    }
    const auto fin = detail::fit_ray(pts, dat, wave_plus, wave_minus);
    pts.clear();
    dat.clear();
    for (std::size_t k = 0; k < rec_out.size(); ++k) {
      const std::size_t idx = c.vertex + k;
      if (idx >= as.out_ray_begin && on_window(idx)) {
        pts.push_back(c.samples[idx].point);
        dat.push_back(rec_out[k]);
      }
    }
    const auto fout = detail::fit_ray(pts, dat, wave_plus, wave_minus);
    in[j] = fin.coeff;
    out[j] = fout.coeff;
    cond = std::max({cond, fin.conditioning, fout.conditioning});
    out_records[j] = std::move(rec_out);
  }
  ScatterResult r = detail::combine(in, out);
  cond = std::max(cond, r.conditioning);
  r.conditioning = cond;
  r.untrusted = cond > 1e8 || prob.extraction_radius < 3.0;

  // distortion law on the scattering solution along the out-ray window
  const Eigen::Matrix2cd m = [&] {
    Eigen::Matrix2cd mm;
    mm << out[0].minus, out[1].minus, in[0].plus, in[1].plus;
    return mm;
  }();
  const Eigen::Vector2cd p = m.fullPivLu().solve(Eigen::Vector2cd(0.0, 1.0));
  std::vector<double> rr;
  std::vector<cplx> ps;
  for (std::size_t k = 0; k < out_records[0].size(); ++k) {
    const std::size_t idx = c.vertex + k;
    if (idx >= as.out_ray_begin && on_window(idx)) {
      rr.push_back(radial_variable(c.samples[idx].point));
      ps.push_back(p(0) * out_records[0][k][0] + p(1) * out_records[1][k][0]);
    }
  }
  r.distortion_exponent = detail::fit_distortion(rr, ps);
  r.resonance_proximity = std::abs(reciprocal_gamma((1.0 - std::abs(v.alpha()) + mu) / 2.0));
  r.resonance = r.resonance_proximity < 1e-12;
  return r;
}

}  // namespace toboggan
