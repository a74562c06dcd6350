#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <boost/multiprecision/cpp_complex.hpp>

#include "toboggan/errors.hpp"
#include "toboggan/sheet_point.hpp"

namespace toboggan {

struct SeriesControl {
  int max_terms = 4000;
  double relative_tolerance = 1e-13;
  double asymptotic_crossover = 30.0;

  void validate() const {
    if (max_terms < 1) throw InvalidArgument("max_terms must be positive");
    if (!(relative_tolerance >= 100.0 * std::numeric_limits<double>::epsilon()))
      throw InvalidArgument("relative_tolerance below 100 machine epsilons");
    if (!(asymptotic_crossover > 0.0)) throw InvalidArgument("asymptotic_crossover must be positive");
  }
};

namespace detail {

inline constexpr std::array<double, 9> lanczos_coeff{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224029,
    771.32342877765308,      -176.6150291621406,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195709e-6, 1.5056327351493116e-7};

/// sin(pi z) with the real part reduced exactly before scaling by pi.
inline cplx sin_pi(cplx z) {
  const double x = z.real();
  const double r = x - 2.0 * std::round(x / 2.0);  // in [-1, 1]
  const double s = std::sin(pi * r);
  const double c = std::cos(pi * r);
  const double y = pi * z.imag();
  return {s * std::cosh(y), c * std::sinh(y)};
}

/// log Gamma(z) for Re z >= 1/2 (not necessarily the principal branch).
inline cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx s = lanczos_coeff[0];
  for (int k = 1; k < 9; ++k) s += lanczos_coeff[k] / (z + static_cast<double>(k));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

inline bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

}  // namespace detail

/// Gamma function (Lanczos g = 7, reflection for Re z < 1/2).
inline cplx gamma(cplx z) {
  if (detail::is_nonpositive_integer(z))
    throw SingularityError("gamma has a pole at the nonpositive integer " + std::to_string(z.real()));
  if (z.real() < 0.5) return pi / (detail::sin_pi(z) * std::exp(detail::log_gamma_right(1.0 - z)));
  return std::exp(detail::log_gamma_right(z));
}

/// 1/Gamma(z); entire, exactly zero at nonpositive integers.
inline cplx reciprocal_gamma(cplx z) {
  if (detail::is_nonpositive_integer(z)) return {0.0, 0.0};
  if (z.real() < 0.5) return detail::sin_pi(z) * std::exp(detail::log_gamma_right(1.0 - z)) / pi;
  return std::exp(-detail::log_gamma_right(z));
}

namespace detail {

struct SeriesSum {
  cplx value;
  double largest_term;
  bool converged;
};

/// Taylor series of 1F1 in scalar type C.
template <class C>
SeriesSum kummer_taylor(const C& a, const C& b, const C& z, double tol, int max_terms) {
  using std::abs;
  using boost::multiprecision::abs;
  C term(1);
  C sum(1);
  double largest = 1.0;
  int small_in_row = 0;
  const double zabs = static_cast<double>(abs(z));
  for (int k = 0; k < max_terms; ++k) {
    const C kk(k);
    const C bk = b + kk;
    if (abs(bk) == 0) throw SingularityError("1F1 parameter b is a nonpositive integer");
    term *= (a + kk) * z / (bk * (kk + C(1)));
    sum += term;
    const double tabs = static_cast<double>(abs(term));
    largest = std::max(largest, tabs);
    if (tabs == 0.0) return {cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())), largest, true};
    if (tabs <= tol * static_cast<double>(abs(sum)) && k + 1 >= zabs) {
      if (++small_in_row >= 2)
        return {cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())), largest, true};
    } else {
      small_in_row = 0;
    }
  }
  return {cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())), largest, false};
}

inline SeriesSum kummer_taylor_double(cplx a, cplx b, cplx z, double tol, int max_terms) {
  return kummer_taylor<cplx>(a, b, z, tol, max_terms);
}

inline SeriesSum kummer_taylor_quad(cplx a, cplx b, cplx z, double tol, int max_terms) {
  using Q = boost::multiprecision::cpp_complex_quad;
  return kummer_taylor<Q>(Q(a.real(), a.imag()), Q(b.real(), b.imag()), Q(z.real(), z.imag()), tol,
                          max_terms);
}

/// Poincare series sum_s (p)_s (q)_s / s! w^s truncated at its smallest term.
inline cplx poincare_sum(cplx p, cplx q, cplx w, double tol, int max_terms, double& last_rel) {
  cplx term = 1.0;
  cplx sum = 1.0;
  double prev = 1.0;
  for (int s = 0; s < max_terms; ++s) {
    const cplx next = term * (p + double(s)) * (q + double(s)) * w / double(s + 1);
    const double nabs = std::abs(next);
    if (nabs == 0.0) {
      last_rel = 0.0;
      return sum + next;
    }
    if (nabs > prev) break;  // optimal truncation
    term = next;
    sum += term;
    prev = nabs;
    if (nabs <= tol * std::abs(sum)) break;
  }
  last_rel = prev / std::max(std::abs(sum), std::numeric_limits<double>::min());
  return sum;
}

}  // namespace detail

/// Taylor-series evaluation of M(a, b, z). Negative Re z goes through the
/// Kummer transformation e^z M(b-a, b, -z); a quad-precision rerun covers
/// cancellation the double sum cannot resolve.
inline cplx kummer_m_series(cplx a, cplx b, cplx z, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (detail::is_nonpositive_integer(b)) throw SingularityError("1F1 parameter b is a nonpositive integer");
  if (z == cplx{}) return 1.0;
  const bool terminating = detail::is_nonpositive_integer(a);
  cplx prefactor = 1.0;
  if (z.real() < 0.0 && !terminating) {
    prefactor = std::exp(z);
    a = b - a;
    z = -z;
  }
  auto r = detail::kummer_taylor_double(a, b, z, ctl.relative_tolerance, ctl.max_terms);
  const double eps = std::numeric_limits<double>::epsilon();
  const double lost = r.largest_term * eps / std::max(std::abs(r.value), std::numeric_limits<double>::min());
  if (r.converged && lost <= 1e-2 * 1e-10) return prefactor * r.value;
  if (r.converged || r.largest_term < 1e300) {
    auto q = detail::kummer_taylor_quad(a, b, z, std::max(ctl.relative_tolerance, 1e-17), ctl.max_terms);
    if (q.converged) {
      const double qlost = q.largest_term * 1e-33 / std::max(std::abs(q.value), std::numeric_limits<double>::min());
      if (qlost <= 1e-10) return prefactor * q.value;
    }
  }
  throw PrecisionLossError("1F1 Taylor series did not reach the requested accuracy", prefactor * r.value);
}

/// Large-|z| expansion of M(a, b, z): the e^z and z^{-a} components, each a
/// Poincare series truncated at its smallest term. The z^{-a} component
/// carries e^{+i pi a} for Im z >= 0 and e^{-i pi a} otherwise.
inline cplx kummer_m_asymptotic(cplx a, cplx b, cplx z, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (detail::is_nonpositive_integer(b)) throw SingularityError("1F1 parameter b is a nonpositive integer");
  if (z == cplx{}) throw InvalidArgument("asymptotic expansion of 1F1 needs z != 0");
  const cplx i{0.0, 1.0};
  const cplx gb = gamma(b);
  const cplx r_ba = reciprocal_gamma(b - a);
  const cplx r_a = reciprocal_gamma(a);
  cplx total = 0.0;
  double err = 0.0;  // absolute truncation error of the two components
  if (r_ba != cplx{}) {
    const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
    double rel = 0.0;
    const cplx s1 = detail::poincare_sum(a, a - b + 1.0, -1.0 / z, ctl.relative_tolerance, ctl.max_terms, rel);
    const cplx c1 = std::exp(sgn * i * pi * a) * std::pow(z, -a) * r_ba * s1;
    total += c1;
    err += rel * std::abs(c1);
  }
  if (r_a != cplx{}) {
    double rel = 0.0;
    const cplx s2 = detail::poincare_sum(1.0 - a, b - a, 1.0 / z, ctl.relative_tolerance, ctl.max_terms, rel);
    const cplx c2 = std::exp(z) * std::pow(z, a - b) * r_a * s2;
    total += c2;
    err += rel * std::abs(c2);
  }
  total *= gb;
  if (err > 1e-10 * std::abs(total / gb))
    throw PrecisionLossError("1F1 asymptotic series truncated above tolerance", total);
  return total;
}

/// Kummer's confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).
inline cplx kummer_m(cplx a, cplx b, cplx z, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (std::abs(z) < ctl.asymptotic_crossover || detail::is_nonpositive_integer(a))
    return kummer_m_series(a, b, z, ctl);
  try {
    return kummer_m_asymptotic(a, b, z, ctl);
  } catch (const PrecisionLossError&) {
    // large parameters push the smallest Poincare term up; the Taylor path
    // (with its quad-precision rerun) still resolves moderate |z|
    return kummer_m_series(a, b, z, ctl);
  }
}

/// Generalized Laguerre polynomial L_n^{(a)}(z) by the three-term recurrence.
inline cplx laguerre(int n, double a, cplx z) {
  if (n < 0) throw InvalidArgument("laguerre degree must be nonnegative");
  cplx prev = 1.0;
  if (n == 0) return prev;
  cplx cur = 1.0 + a - z;
  for (int k = 1; k < n; ++k) {
    const cplx next = ((2.0 * k + 1.0 + a - z) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace toboggan
