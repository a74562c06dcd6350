#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/polynomial.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/spectrum.hpp"

namespace toboggan {

/// Input state psi = x^power e^{-x^2/2} P(x).
struct GaussianState {
  Polynomial polynomial{1.0};
  double power = 0.0;
};

/// L_n^{(a)}(t) coefficients in t.
inline Polynomial laguerre_polynomial(int n, double a) {
  if (n < 0) throw InvalidArgument("Laguerre degree must be nonnegative");
  std::vector<cplx> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    // binom(n + a, n - k) / k!
    double b = 1.0;
    for (int j = 1; j <= n - k; ++j) b *= (a + k + j) / j;
    for (int j = 2; j <= k; ++j) b /= j;
    c[k] = (k % 2 ? -b : b);
  }
  return Polynomial(std::move(c));
}

/// p(x^2) for a polynomial p.
inline Polynomial in_square(const Polynomial& p) {
  std::vector<cplx> c(2 * std::max(0, p.degree()) + 1, 0.0);
  for (int k = 0; k <= p.degree(); ++k) c[2 * k] = p[k];
  return Polynomial(std::move(c));
}

/// The oscillator state x^{1/2 +- alpha} e^{-x^2/2} L_n^{(+-alpha)}(x^2).
inline GaussianState oscillator_state(int n, double alpha, QuasiParity q) {
  const double sa = q == QuasiParity::Plus ? alpha : -alpha;
  return {in_square(laguerre_polynomial(n, sa)), 0.5 + sa};
}

/// Roots of p polished by Newton steps on p itself.
inline std::vector<cplx> polished_roots(const Polynomial& p) {
  const Polynomial dp = p.derivative();
  std::vector<cplx> r = p.roots();
  for (auto& z : r)
    for (int it = 0; it < 3; ++it) {
      const cplx d = dp(z);
      if (d == cplx{}) break;
      z -= p(z) / d;
    }
  return r;
}

/// W = -psi'/psi = x - power/x - P'/P.
inline RationalExpression superpotential(const GaussianState& s) {
  if (s.polynomial.is_zero()) throw InvalidArgument("zero input state");
  RationalExpression w = RationalExpression::from_partial_fractions(Polynomial::x(), {{0.0, {-s.power}}});
  if (s.polynomial.degree() > 0) w = w - RationalExpression(s.polynomial.derivative(), s.polynomial);
  return w;
}

/// Oscillator states: P'/P = sum 1/(x - z_k) over the zeros z = +-sqrt(t_k)
/// of L_n(x^2), with t_k the (better conditioned) roots of L_n in t.
inline RationalExpression superpotential(int n, double alpha, QuasiParity q) {
  const double sa = q == QuasiParity::Plus ? alpha : -alpha;
  const Polynomial lag = laguerre_polynomial(n, sa);
  std::vector<FractionPole> poles{{0.0, {-(0.5 + sa)}}};
  for (const auto& t : polished_roots(lag))
    for (const cplx z : {std::sqrt(t), -std::sqrt(t)}) poles.push_back({z, {-1.0}});
  return RationalExpression::from_partial_fractions(Polynomial::x(), poles);
}

struct Partners {
  RationalExpression plus;   ///< W^2 + W'
  RationalExpression minus;  ///< W^2 - W'
};

inline Partners partners(const RationalExpression& w) {
  const auto w2 = w * w;
  const auto dw = w.derivative();
  return {w2 + dw, w2 - dw};
}

/// V = potential + energy_offset; the constant is kept apart so spectra
/// of V are those of potential shifted by energy_offset.
struct PowerLawForm {
  PowerLawPotential potential;
  cplx energy_offset;
};

/// Partial fractions of V into harmonic, linear and constant parts, an
/// origin c/x^2 + d/x and off-origin second-order poles.
inline PowerLawForm to_power_law(const RationalExpression& v, double tol = 1e-9) {
  const Polynomial& poly = v.polynomial_part();
  if (poly.degree() > 2) {
    std::ostringstream os;
    os << "polynomial part of degree " << poly.degree() << ": " << poly.str();
    throw InvalidArgument(os.str());
  }
  PowerLawForm out;
  out.potential.harmonic = 0.0;
  out.energy_offset = poly[0];
  if (std::abs(poly[2].imag()) > tol * std::max(1.0, poly.norm())) throw InvalidArgument("complex x^2 coefficient " + detail::format_coefficient(poly[2]));
  out.potential.harmonic = poly[2].real();
  if (poly[1] != cplx{}) out.potential.add_term(RationalExponent(1), cplx(0.0, -1.0) * poly[1]);  // b x = -ib (ix)

  for (const auto& f : v.fraction_poles()) {
    cplx c = f.at;
    if (std::abs(c) < 1e-10) c = 0.0;
    if (std::abs(c.imag()) < 1e-12 * (1.0 + std::abs(c))) c.imag(0.0);
    if (f.order() > 2) {
      std::ostringstream os;
      os << "pole of order " << f.order() << " at x = " << detail::format_coefficient(c);
      throw InvalidArgument(os.str());
    }
    const cplx a1 = f.coeff[0];
    const cplx a2 = f.order() == 2 ? f.coeff[1] : cplx{};
    if (c == cplx{}) {
      if (std::abs(a2.imag()) > tol * (1.0 + std::abs(a2)) || a2.real() < -0.25)
        throw InvalidArgument("origin coefficient " + detail::format_coefficient(a2) +
                              "/x^2 is not a real centrifugal term >= -1/4");
      out.potential.ell = -0.5 + std::sqrt(0.25 + a2.real());
      if (a1 != cplx{}) out.potential.add_term(RationalExponent(-1), cplx(0.0, 1.0) * a1);  // d/x = i d (ix)^{-1}
    } else {
      if (std::abs(a1) > tol * std::max(1.0, std::abs(a2)))
        throw InvalidArgument("simple pole at x = " + detail::format_coefficient(c) + " with residue " +
                              detail::format_coefficient(a1));
      out.potential.poles.push_back({c, a2});
    }
  }
  return out;
}

}  // namespace toboggan
