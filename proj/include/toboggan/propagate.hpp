#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/sheet_point.hpp"

namespace toboggan {

/// psi is carried as (log psi, psi'/psi). Near a node of psi the pair is
/// flipped to (log psi', psi/psi'); `flipped` records which form is stored
/// internally, while log_amplitude / log_derivative always expose psi.
struct PropagationState {
  SheetPoint position;
  cplx log_amplitude;
  cplx log_derivative;
  bool flipped = false;
  cplx flip_log = {};   ///< log psi' when flipped
  cplx flip_ratio = {}; ///< psi/psi' when flipped

  /// Homogeneous pair proportional to (psi, psi') normalized so that the
  /// larger component has modulus one, with the phase of the unflipped gauge
  /// (1, y) whenever |y| <= 1.
  std::array<cplx, 2> direction() const {
    if (!flipped) {
      const double m = std::max(1.0, std::abs(log_derivative));
      return {1.0 / m, log_derivative / m};
    }
    const double m = std::max(1.0, std::abs(flip_ratio));
    return {flip_ratio / m, 1.0 / m};
  }

  /// log psi in either gauge (the imaginary part is defined mod 2 pi when flipped).
  cplx log_psi() const { return flipped ? flip_log + std::log(flip_ratio) : log_amplitude; }
};

struct StepControl {
  double absolute_tolerance = 1e-12;
  double relative_tolerance = 1e-11;
  double max_step = 0.25;
  long max_steps = 2'000'000;

  void validate() const {
    if (!(absolute_tolerance >= 1e-14) || !(relative_tolerance >= 1e-14))
      throw InvalidArgument("step tolerances must be at least 1e-14");
    if (!(max_step > 0.0)) throw InvalidArgument("max_step must be positive");
    if (max_steps < 1) throw InvalidArgument("max_steps must be positive");
  }
};

enum class InitialKind { Decaying, Growing, RegularAtOrigin };
enum class ContourEnd { In, Out };

/// Unflipped state from known data log psi and y = psi'/psi.
inline PropagationState state_at(const SheetPoint& p, cplx log_psi, cplx y) {
  PropagationState s;
  s.position = p;
  s.log_amplitude = log_psi;
  s.log_derivative = y;
  return s;
}

namespace detail {

inline std::string wedge_list(const PowerLawPotential& v) {
  std::ostringstream os;
  bool first = true;
  for (const auto& w : asymptotic_wedges(v, -3, 3)) {
    os << (first ? "" : ", ") << "k=" << w.k << ": (" << w.lo / pi << "pi, " << w.hi / pi << "pi)";
    first = false;
  }
  return os.str();
}

inline PropagationState make_state(const SheetPoint& p, cplx log_amp, cplx y) { return state_at(p, log_amp, y); }

/// WKB start for a general dominant power: y = -s - V'/(4 (V-E)), with the
/// branch of s = sqrt(V-E) chosen so that psi decays outward.
inline PropagationState wkb_state(const PowerLawPotential& v, cplx E, const SheetPoint& p, InitialKind kind) {
  const cplx q = eval(v, p) - E;
  const cplx dq = eval_derivative(v, p);
  cplx s = std::sqrt(q);
  const cplx outward = std::polar(1.0, p.argument);
  if ((s * outward).real() < 0.0) s = -s;
  if (std::abs((s * outward).real()) < 0.05 * std::abs(s)) {
    std::ostringstream os;
    os << "WKB start at arg x = " << p.argument / pi << "pi lies too close to an anti-Stokes line";
    throw WedgeError(os.str());
  }
  const double sign = kind == InitialKind::Decaying ? -1.0 : 1.0;
  return make_state(p, {}, sign * s - dq / (4.0 * q));
}

}  // namespace detail

/// Asymptotic start at a far contour point. For an asymptotically harmonic
/// potential with unit x^2 coefficient the Gaussian forms
///   Decaying: y = -x + (mu - 1/2)/x,   Growing: y = x - (mu + 1/2)/x,   mu = E/2
/// are used and the sector is checked against k*pi + theta in (-pi/4, pi/4);
/// other potentials start from the two-term WKB form. RegularAtOrigin is the
/// small-x solution x^{ell+1}(1 - E x^2 / (4 ell + 6)).
inline PropagationState initial_state(const PowerLawPotential& v, cplx E, const SheetPoint& p,
                                      InitialKind kind = InitialKind::Decaying, double r_min = 6.0) {
  if (p.modulus == 0.0) throw SingularityError("initial state at the branch point");
  const cplx x = p.value();
  if (kind == InitialKind::RegularAtOrigin) {
    const double l = v.ell;
    return detail::make_state(p, (l + 1.0) * p.log(), (l + 1.0) / x - E * x / (2.0 * l + 3.0));
  }
  if (v.asymptotically_harmonic() && v.harmonic == 1.0) {
    if (p.modulus < r_min) {
      std::ostringstream os;
      os << "asymptotic start needs |x| >= " << r_min << ", got " << p.modulus;
      throw InvalidArgument(os.str());
    }
    bool decays = false;
    for (const auto& w : asymptotic_wedges(v, -64, 64)) decays = decays || w.contains(p.argument);
    const cplx mu = E / 2.0;
    if (kind == InitialKind::Decaying) {
      if (!decays) {
        std::ostringstream os;
        os << "decaying start requested at arg x = " << p.argument / pi
           << "pi where exp(-x^2/2) grows; admissible sectors " << detail::wedge_list(v);
        throw WedgeError(os.str());
      }
      return detail::make_state(p, (mu - 0.5) * p.log() - 0.5 * x * x, -x + (mu - 0.5) / x);
    }
    if (!decays) {
      std::ostringstream os;
      os << "growing start requested at arg x = " << p.argument / pi
         << "pi where exp(+x^2/2) is subdominant; admissible sectors " << detail::wedge_list(v);
      throw WedgeError(os.str());
    }
    return detail::make_state(p, -(mu + 0.5) * p.log() + 0.5 * x * x, x - (mu + 0.5) / x);
  }
  return detail::wkb_state(v, E, p, kind);
}

namespace detail {

using Vec2 = std::array<cplx, 2>;

/// Dormand-Prince 5(4) coefficients.
struct DP {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline Vec2 axpy(const Vec2& y, std::initializer_list<std::pair<double, const Vec2*>> terms, double h) {
  Vec2 r = y;
  for (const auto& [c, k] : terms) {
    r[0] += h * c * (*k)[0];
    r[1] += h * c * (*k)[1];
  }
  return r;
}

/// Straight chord between two sheet points; the argument of interior points
/// is continued from the start point.
struct Chord {
  SheetPoint a;
  cplx za;
  cplx d;

  Chord(const SheetPoint& from, const SheetPoint& to) : a(from), za(from.value()), d(to.value() - from.value()) {}

  SheetPoint at(double s) const {
    const cplx z = za + s * d;
    return {std::abs(z), a.argument + std::arg(z / za)};
  }
};

/// Integrates dY/dx = f(x, Y) along a chord with s in [0, 1]. `norm` returns
/// the scaled error of a step, `after` may rewrite the state between steps
/// (Riccati flips) and returns true if it did.
template <class F, class Norm, class After>
void dopri_chord(const Chord& ch, Vec2& y, double& h, const StepControl& ctl, long& steps, F&& f,
                 Norm&& norm, After&& after, double t_label) {
  const double len = std::abs(ch.d);
  if (len == 0.0) return;
  const double hmax = std::min(1.0, ctl.max_step / len);
  double s = 0.0;
  h = std::min(std::max(h, 1e-6), hmax);
  auto rhs = [&](double si, const Vec2& yi) {
    Vec2 k = f(ch.at(si), yi);
    k[0] *= ch.d;
    k[1] *= ch.d;
    return k;
  };
  Vec2 k1 = rhs(0.0, y);
  while (s < 1.0) {
    if (++steps > ctl.max_steps)
      throw PropagationError("step budget exhausted", t_label);
    const bool last = s + h >= 1.0 - 1e-14;
    const double hh = last ? 1.0 - s : h;
    const Vec2 k2 = rhs(s + DP::c2 * hh, axpy(y, {{DP::a21, &k1}}, hh));
    const Vec2 k3 = rhs(s + DP::c3 * hh, axpy(y, {{DP::a31, &k1}, {DP::a32, &k2}}, hh));
    const Vec2 k4 = rhs(s + DP::c4 * hh, axpy(y, {{DP::a41, &k1}, {DP::a42, &k2}, {DP::a43, &k3}}, hh));
    const Vec2 k5 = rhs(s + DP::c5 * hh,
                        axpy(y, {{DP::a51, &k1}, {DP::a52, &k2}, {DP::a53, &k3}, {DP::a54, &k4}}, hh));
    const Vec2 k6 = rhs(s + hh, axpy(y, {{DP::a61, &k1}, {DP::a62, &k2}, {DP::a63, &k3},
                                         {DP::a64, &k4}, {DP::a65, &k5}}, hh));
    const Vec2 yn =
        axpy(y, {{DP::b1, &k1}, {DP::b3, &k3}, {DP::b4, &k4}, {DP::b5, &k5}, {DP::b6, &k6}}, hh);
    const Vec2 k7 = rhs(s + hh, yn);
    const Vec2 err = axpy(Vec2{}, {{DP::e1, &k1}, {DP::e3, &k3}, {DP::e4, &k4}, {DP::e5, &k5},
                                   {DP::e6, &k6}, {DP::e7, &k7}}, hh);
    const double en = norm(y, yn, err);
    if (!std::isfinite(en)) {
      h = hh * 0.25;
      if (h < 1e-14) throw PropagationError("non-finite state during propagation", t_label + s);
      continue;
    }
    if (en <= 1.0) {
      s = last ? 1.0 : s + hh;
      y = yn;
      k1 = k7;
      if (after(y, ch.at(s))) k1 = rhs(s, y);
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (!last || fac < 1.0) h = std::min(hh * fac, hmax);
    } else {
      h = hh * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
      if (h < 1e-13) throw PropagationError("step size underflow", t_label + s);
    }
  }
}

/// Riccati right-hand side with internal flip mode.
struct RiccatiSystem {
  const PowerLawPotential& v;
  cplx E;
  bool flipped = false;

  Vec2 operator()(const SheetPoint& p, const Vec2& y) const {
    const cplx q = eval(v, p) - E;
    if (!flipped) return {y[1], q - y[1] * y[1]};
    return {q * y[1], 1.0 - q * y[1] * y[1]};
  }

  double scale(const SheetPoint& p) const { return 1.0 + std::sqrt(std::abs(eval(v, p) - E)); }

  /// Switches between (log psi, y) and (log psi', 1/y) with hysteresis.
  bool maybe_flip(Vec2& y, const SheetPoint& p) {
    const double sc = scale(p);
    if (!flipped && std::abs(y[1]) > 8.0 * sc) {
      y = {y[0] + std::log(y[1]), 1.0 / y[1]};
      flipped = true;
      return true;
    }
    if (flipped && std::abs(y[1]) * sc > 0.5) {
      y = {y[0] - std::log(y[1]), 1.0 / y[1]};
      flipped = false;
      return true;
    }
    return false;
  }
};

inline PropagationState export_state(const SheetPoint& p, const Vec2& y, bool flipped) {
  PropagationState s;
  s.position = p;
  s.flipped = flipped;
  if (!flipped) {
    s.log_amplitude = y[0];
    s.log_derivative = y[1];
  } else {
    s.flip_log = y[0];
    s.flip_ratio = y[1];
    s.log_amplitude = y[0] + std::log(y[1]);
    s.log_derivative = 1.0 / y[1];
  }
  return s;
}

}  // namespace detail

/// Transports a state along contour samples [from, to] (either direction) in
/// Riccati form. If `record` is given, the state at every visited sample is
/// appended to it.
inline PropagationState transport(const PowerLawPotential& v, cplx E, const Contour& c, std::size_t from,
                                  std::size_t to, const PropagationState& start, const StepControl& ctl = {},
                                  std::vector<PropagationState>* record = nullptr) {
  ctl.validate();
  if (from >= c.size() || to >= c.size()) throw InvalidArgument("transport index out of range");
  detail::RiccatiSystem sys{v, E};
  detail::Vec2 y;
  if (start.flipped) {
    sys.flipped = true;
    y = {start.flip_log, start.flip_ratio};
  } else {
    y = {start.log_amplitude, start.log_derivative};
    sys.maybe_flip(y, c.samples[from].point);
  }
  if (record) record->push_back(detail::export_state(c.samples[from].point, y, sys.flipped));
  double h = 0.1;
  long steps = 0;
  const double atol = ctl.absolute_tolerance;
  const double rtol = ctl.relative_tolerance;
  auto norm = [&](const detail::Vec2& y0, const detail::Vec2& y1, const detail::Vec2& e) {
    const double s0 = std::abs(e[0]) / (atol + rtol);
    const double s1 = std::abs(e[1]) / (atol + rtol * std::max(std::abs(y0[1]), std::abs(y1[1])));
    return std::max(s0, s1);
  };
  auto after = [&](detail::Vec2& yy, const SheetPoint& p) { return sys.maybe_flip(yy, p); };
  const int dir = to >= from ? 1 : -1;
  for (std::size_t i = from; i != to; i += dir) {
    const auto& a = c.samples[i];
    const auto& b = c.samples[i + dir];
    detail::Chord ch(a.point, b.point);
    detail::dopri_chord(ch, y, h, ctl, steps, std::cref(sys), norm, after, a.t);
    // re-anchor the argument to the sample's exact unwound value
    if (record) record->push_back(detail::export_state(b.point, y, sys.flipped));
  }
  return detail::export_state(c.samples[to].point, y, sys.flipped);
}

/// Starting state at one end of a contour: regular-at-origin for the inner
/// end of a half-line, decaying asymptotics otherwise.
inline PropagationState end_state(const PowerLawPotential& v, cplx E, const Contour& c, ContourEnd end) {
  if (c.kind == ContourKind::HalfLine && end == ContourEnd::In)
    return initial_state(v, E, c.front(), InitialKind::RegularAtOrigin);
  return initial_state(v, E, end == ContourEnd::In ? c.front() : c.back(), InitialKind::Decaying,
                       std::min(6.0, 0.75 * c.truncation_radius));
}

/// Propagates the decaying solution from one end of the contour to its vertex.
inline PropagationState propagate(const PowerLawPotential& v, cplx E, const Contour& c, ContourEnd from_end,
                                  const StepControl& ctl = {}) {
  if (c.size() < 2) throw InvalidArgument("contour has fewer than two samples");
  const std::size_t from = from_end == ContourEnd::In ? 0 : c.size() - 1;
  return transport(v, E, c, from, c.vertex, end_state(v, E, c, from_end), ctl);
}

namespace detail {

inline void check_same_position(const PropagationState& l, const PropagationState& r) {
  if (std::abs(l.position.modulus - r.position.modulus) > 1e-12 * (1.0 + l.position.modulus) ||
      std::abs(l.position.argument - r.position.argument) > 1e-12)
    throw InvalidArgument("states are not at the same sheet point");
}

}  // namespace detail

/// y_L - y_R at the common matching point.
inline cplx wronskian_mismatch(const PropagationState& left, const PropagationState& right) {
  detail::check_same_position(left, right);
  return left.log_derivative - right.log_derivative;
}

/// Pole-free matching function (y_L - y_R) / sqrt((1+|y_L|^2)(1+|y_R|^2)),
/// evaluated in whichever gauge each state carries. For PT-symmetric
/// problems matched at the PT-fixed vertex it is real on the real E axis.
inline cplx normalized_mismatch(const PropagationState& left, const PropagationState& right) {
  detail::check_same_position(left, right);
  auto coords = [](const PropagationState& s) -> std::pair<cplx, cplx> {
    if (!s.flipped) return {1.0, s.log_derivative};
    return {s.flip_ratio, 1.0};
  };
  auto [pl, dl] = coords(left);
  auto [pr, dr] = coords(right);
  const cplx w = dl * pr - pl * dr;  // psi_L' psi_R - psi_L psi_R'
  const double nl = std::sqrt(std::norm(pl) + std::norm(dl));
  const double nr = std::sqrt(std::norm(pr) + std::norm(dr));
  // rotate each flipped gauge (z, 1) back to the phase of (1, y) = (z, 1)/z
  cplx phase = 1.0;
  if (left.flipped && pl != cplx{}) phase *= std::abs(pl) / pl;
  if (right.flipped && pr != cplx{}) phase *= std::abs(pr) / pr;
  return w * phase / (nl * nr);
}

/// Matching function of the two-sided shooting problem at energy E.
inline cplx shooting_mismatch(const PowerLawPotential& v, cplx E, const Contour& c, const StepControl& ctl = {}) {
  const auto l = propagate(v, E, c, ContourEnd::In, ctl);
  const auto r = propagate(v, E, c, ContourEnd::Out, ctl);
  return normalized_mismatch(l, r);
}

/// Linear propagation of (psi, psi') between samples; optional per-sample record.
inline std::array<cplx, 2> transport_linear(const PowerLawPotential& v, cplx E, const Contour& c, std::size_t from,
                                            std::size_t to, std::array<cplx, 2> start,
                                            const StepControl& ctl = {},
                                            std::vector<std::array<cplx, 2>>* record = nullptr) {
  ctl.validate();
  if (from >= c.size() || to >= c.size()) throw InvalidArgument("transport index out of range");
  auto f = [&](const SheetPoint& p, const detail::Vec2& y) -> detail::Vec2 {
    return {y[1], (eval(v, p) - E) * y[0]};
  };
  const double atol = ctl.absolute_tolerance;
  const double rtol = ctl.relative_tolerance;
  auto norm = [&](const detail::Vec2& y0, const detail::Vec2& y1, const detail::Vec2& e) {
    const double m = std::max(std::abs(y0[0]) + std::abs(y0[1]), std::abs(y1[0]) + std::abs(y1[1]));
    return (std::abs(e[0]) + std::abs(e[1])) / (atol + rtol * m);
  };
  auto after = [](detail::Vec2&, const SheetPoint&) { return false; };
  detail::Vec2 y = start;
  if (record) record->push_back(y);
  double h = 0.1;
  long steps = 0;
  const int dir = to >= from ? 1 : -1;
  for (std::size_t i = from; i != to; i += dir) {
    detail::Chord ch(c.samples[i].point, c.samples[i + dir].point);
    detail::dopri_chord(ch, y, h, ctl, steps, f, norm, after, c.samples[i].t);
    if (record) record->push_back(y);
  }
  return y;
}

/// Transfer matrix M with (psi, psi')(to) = M (psi, psi')(from).
inline std::array<std::array<cplx, 2>, 2> transfer_matrix(const PowerLawPotential& v, cplx E, const Contour& c,
                                                          std::size_t from, std::size_t to,
                                                          const StepControl& ctl = {}) {
  const auto u = transport_linear(v, E, c, from, to, {1.0, 0.0}, ctl);
  const auto w = transport_linear(v, E, c, from, to, {0.0, 1.0}, ctl);
  return {{{u[0], w[0]}, {u[1], w[1]}}};
}

}  // namespace toboggan
