#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/spectrum.hpp"

namespace toboggan {

/// Change of variables ix = (iy)^tau, psi = y^{(tau-1)/2} Psi.
///
/// In the (ix)^beta convention a term g (ix)^beta becomes tau^2 g (iy)^{tau(beta+2)-2};
/// the energy becomes the coupling -tau^2 E of (iy)^{2tau-2}; a source term
/// landing on exponent 0 becomes the target energy; the centrifugal index
/// obeys L + 1/2 = tau (ell + 1/2).
struct LiouvilleMap {
  RationalExponent tau{1};
  double source_ell = 0.0;
  double target_ell = 0.0;
  RationalExponent energy_exponent{0};         ///< 2 tau - 2, target slot of the source energy
  cplx energy_coupling{-1.0};                  ///< (iy)-convention coupling per unit source E: -tau^2
  cplx energy_jacobian{1.0};                   ///< y-convention G per unit E: (-1)^tau tau^2
  RationalExponent inverse_energy_exponent{0}; ///< beta_tau = -2 + 2/tau
  cplx target_energy{0.0};                     ///< -tau^2 g_{beta_tau}
  int source_winding = 0;
  int target_winding = 0;
  bool canonical = false;                      ///< every target exponent an even integer
};

struct MinimalTau {
  RationalExponent tau;
  bool canonical;
};

/// Smallest tau in {1/2, 1, 3/2, ...} with beta*tau an even integer for every
/// term with nonzero coupling.
inline MinimalTau minimal_tau(const PowerLawPotential& v) {
  long k = 1;
  for (const auto& t : v.terms) {
    if (t.g == cplx{} || t.beta.numerator() == 0) continue;
    // beta*k/2 even  <=>  p*k divisible by 4q
    const long q4 = 4 * t.beta.denominator();
    const long need = q4 / std::gcd(std::abs(t.beta.numerator()), q4);
    k = std::lcm(k, need);
  }
  return {RationalExponent(k, 2), true};
}

struct TransformedPotential {
  PowerLawPotential potential;
  cplx energy_shift;  ///< constant moved to the energy side: -tau^2 * sum g over terms landing on exponent 0
  bool canonical;
};

/// Maps every term; x^2 coefficients enter as (ix)^2 terms and exponent-2
/// images are folded back into `harmonic` when their coupling is real.
inline TransformedPotential transform_potential(const PowerLawPotential& v, RationalExponent tau) {
  if (tau.numerator() <= 0) throw InvalidArgument("tau must be positive");
  if (!v.poles.empty()) throw InvalidArgument("pole terms have no power-law image");
  const double t = tau.value();
  const RationalExponent two{2};
  TransformedPotential out{};
  out.potential.harmonic = 0.0;
  out.potential.ell = t * (v.ell + 0.5) - 0.5;
  out.energy_shift = 0.0;
  std::vector<PowerTerm> src = v.terms;
  if (v.harmonic != 0.0) src.push_back({two, -v.harmonic});
  bool canonical = true;
  for (const auto& term : src) {
    if (term.g == cplx{}) continue;
    const RationalExponent b = tau * (term.beta + two) - two;
    const cplx g = t * t * term.g;
    if (b.numerator() == 0) {
      out.energy_shift -= g;
      continue;
    }
    canonical = canonical && b.is_even_integer();
    if (b == two && g.imag() == 0.0) {
      out.potential.harmonic += -g.real();
    } else {
      out.potential.terms.push_back({b, g});
    }
  }
  out.canonical = canonical;
  return out;
}

namespace detail {

inline cplx i_power(RationalExponent e) {
  if (e.is_integer()) {
    static constexpr std::array<double, 4> re{1, 0, -1, 0};
    static constexpr std::array<double, 4> im{0, 1, 0, -1};
    const long k = ((e.numerator() % 4) + 4) % 4;
    return {re[k], im[k]};
  }
  return std::polar(1.0, e.value() * pi / 2);
}

}  // namespace detail

/// Samplewise image of a contour: |y| = |x|^{1/tau}, arg y = -pi/2 + (arg x + pi/2)/tau.
inline Contour image_contour(const Contour& c, RationalExponent tau) {
  const double t = tau.value();
  Contour r = c;
  r.kind = ContourKind::Image;
  for (auto& s : r.samples)
    s.point = SheetPoint(std::pow(s.point.modulus, 1.0 / t), -pi / 2 + (s.point.argument + pi / 2) / t);
  r.offset = std::pow(c.offset, 1.0 / t);
  r.truncation_radius = std::pow(c.truncation_radius, 1.0 / t);
  r.wedge_in = 0;
  r.wedge_out = 0;
  r.winding = std::max(0, static_cast<int>(std::floor(argument_span(r) / (2.0 * pi))));
  return r;
}

/// Map metadata for a source potential and contour; the target potential
/// itself comes from transform_potential.
inline LiouvilleMap make_map(const PowerLawPotential& v, RationalExponent tau, const Contour& source) {
  const auto tp = transform_potential(v, tau);
  LiouvilleMap m;
  m.tau = tau;
  m.source_ell = v.ell;
  m.target_ell = tp.potential.ell;
  m.energy_exponent = RationalExponent(2) * tau - RationalExponent(2);
  const double t = tau.value();
  m.energy_coupling = -t * t;
  m.energy_jacobian = m.energy_coupling * detail::i_power(m.energy_exponent);
  m.inverse_energy_exponent = RationalExponent(2) / tau - RationalExponent(2);
  m.target_energy = tp.energy_shift;
  m.source_winding = source.winding;
  m.target_winding = image_contour(source, tau).winding;
  m.canonical = tp.canonical;
  return m;
}

struct LiouvilleTransform {
  EigenProblem target;  ///< search window kept in source-energy units
  LiouvilleMap map;
};

inline LiouvilleTransform transform(const EigenProblem& prob, RationalExponent tau, bool require_canonical = false) {
  const auto& v = prob.potential;
  if (!v.asymptotically_harmonic()) throw InvalidArgument("transform needs an asymptotically harmonic source");
  auto tp = transform_potential(v, tau);
  if (require_canonical && !tp.canonical) {
    std::ostringstream os;
    os << "tau = " << tau.str() << " leaves odd or fractional target exponents for beta in {";
    bool first = true;
    const RationalExponent two{2};
    for (const auto& t : v.terms) {
      const RationalExponent b = tau * (t.beta + two) - two;
      if (t.g != cplx{} && b.numerator() != 0 && !b.is_even_integer()) {
        os << (first ? "" : ", ") << t.beta.str();
        first = false;
      }
    }
    if ((tau * RationalExponent(4) - two).is_even_integer() == false) os << (first ? "" : ", ") << "2 (x^2)";
    os << "}";
    throw InvalidArgument(os.str());
  }
  LiouvilleTransform lt;
  lt.map = make_map(v, tau, prob.contour);
  lt.target = prob;
  lt.target.potential = tp.potential;
  lt.target.contour = image_contour(prob.contour, tau);
  return lt;
}

/// Target potential with the source energy E placed in its coupling slot.
inline PowerLawPotential target_potential_at(const LiouvilleTransform& lt, cplx E) {
  PowerLawPotential v = lt.target.potential;
  v.terms.push_back({lt.map.energy_exponent, lt.map.energy_coupling * E});
  return v;
}

/// Quantized values G of the energy-slot coupling (y convention) for which the
/// target problem has the eigenvalue map.target_energy. The scan runs over
/// the source-energy window carried by lt.target.
inline std::vector<EigenResult> find_target_couplings(const LiouvilleTransform& lt) {
  const auto& prob = lt.target;
  const auto f = [&](cplx E) {
    return shooting_mismatch(target_potential_at(lt, E), lt.map.target_energy, prob.contour, prob.step);
  };
  auto rs = scan_and_refine(f, {prob.window_lo, prob.window_hi, prob.grid_points, prob.refine_tolerance});
  for (auto& r : rs) r.energy *= lt.map.energy_jacobian;
  return rs;
}

/// Source energies E = G / ((-1)^tau tau^2) of quantized target couplings.
inline std::vector<EigenResult> pull_back_energy(const LiouvilleMap& m, const std::vector<EigenResult>& target) {
  if (std::abs(m.energy_jacobian) == 0.0) throw InvalidArgument("zero Jacobian on the energy slot");
  std::vector<EigenResult> out = target;
  for (auto& r : out) {
    r.energy /= m.energy_jacobian;
    r.labels.reset();
  }
  return out;
}

}  // namespace toboggan
