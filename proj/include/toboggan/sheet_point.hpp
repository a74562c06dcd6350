#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "toboggan/errors.hpp"

namespace toboggan {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// A point on the universal cover of the punctured plane.
///
/// The argument is the total (unwound) phase; it is never reduced mod 2*pi,
/// so points whose arguments differ by a nonzero multiple of 2*pi live on
/// different sheets even though they embed to the same complex number.
struct SheetPoint {
  double modulus = 0.0;
  double argument = 0.0;

  constexpr SheetPoint() = default;
  SheetPoint(double mod, double arg) : modulus(mod), argument(arg) {
    if (!(mod >= 0.0)) throw InvalidArgument("SheetPoint modulus must be nonnegative");
  }

  /// Embedded value modulus * exp(i * argument).
  cplx value() const { return std::polar(modulus, argument); }

  /// x^p on the covering, using the unwound argument.
  cplx pow(double p) const {
    if (modulus == 0.0) {
      if (p > 0.0) return {0.0, 0.0};
      throw SingularityError("power with nonpositive exponent at the branch point");
    }
    return std::polar(std::pow(modulus, p), p * argument);
  }

  /// Logarithm on the covering (single valued there).
  cplx log() const {
    if (modulus == 0.0) throw SingularityError("logarithm at the branch point");
    return {std::log(modulus), argument};
  }

  /// Rotation by angle (moves between sheets when |angle| accumulates past pi).
  SheetPoint rotated(double angle) const { return {modulus, argument + angle}; }

  /// (ρ, φ) -> (ρ, -π - φ); embeds to -conj(x).
  SheetPoint pt_image() const { return {modulus, -pi - argument}; }

  friend bool operator==(const SheetPoint&, const SheetPoint&) = default;
};

/// Principal value of arg reduced to (-pi, pi].
inline double principal_angle(double a) {
  double r = std::remainder(a, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

/// Sheet point for the embedded value z continued from a nearby reference
/// point: the argument is the one closest to ref.argument.
inline SheetPoint continue_from(const SheetPoint& ref, cplx z) {
  const double m = std::abs(z);
  if (m == 0.0) return {0.0, ref.argument};
  const double a = std::arg(z);
  return {m, ref.argument + principal_angle(a - ref.argument)};
}

}  // namespace toboggan
