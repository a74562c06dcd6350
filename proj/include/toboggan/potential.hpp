#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/sheet_point.hpp"

namespace toboggan {

/// Exact rational exponent p/q, kept in lowest terms with q > 0.
class RationalExponent {
public:
  constexpr RationalExponent() = default;
  RationalExponent(long num, long den = 1) {
    if (den == 0) throw InvalidArgument("rational exponent with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long g = std::gcd(num, den);
    num_ = g ? num / g : num;
    den_ = g ? den / g : den;
  }

  long numerator() const { return num_; }
  long denominator() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  bool is_even_integer() const { return den_ == 1 && num_ % 2 == 0; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p/q", "p" or a signed variant of either.
  static RationalExponent parse(const std::string& s) {
    const auto slash = s.find('/');
    char* end = nullptr;
    const std::string head = s.substr(0, slash);
    const long p = std::strtol(head.c_str(), &end, 10);
    if (head.empty() || *end != '\0') throw InvalidArgument("bad rational exponent '" + s + "'");
    long q = 1;
    if (slash != std::string::npos) {
      const std::string tail = s.substr(slash + 1);
      q = std::strtol(tail.c_str(), &end, 10);
      if (tail.empty() || *end != '\0' || q == 0)
        throw InvalidArgument("bad rational exponent '" + s + "'");
    }
    return {p, q};
  }

  friend RationalExponent operator+(RationalExponent a, RationalExponent b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalExponent operator-(RationalExponent a, RationalExponent b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalExponent operator*(RationalExponent a, RationalExponent b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalExponent operator/(RationalExponent a, RationalExponent b) {
    if (b.num_ == 0) throw InvalidArgument("division by zero exponent");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const RationalExponent&, const RationalExponent&) = default;
  friend bool operator<(RationalExponent a, RationalExponent b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

private:
  long num_ = 0;
  long den_ = 1;
};

/// g * (i x)^beta
struct PowerTerm {
  RationalExponent beta;
  cplx g;
};

/// strength / (x - location)^2
struct PoleTerm {
  cplx location;
  cplx strength;
};

/// V(x) = ell(ell+1)/x^2 + harmonic * x^2 + sum g (ix)^beta + sum G/(x-c)^2.
///
/// Power terms use the (ix)^beta convention, which makes every term with a
/// real coupling PT-symmetric on its own. Exponents outside (-2, 2) are
/// allowed so that Liouville images can be represented; the Gaussian
/// boundary conditions additionally require asymptotically_harmonic().
struct PowerLawPotential {
  double ell = 0.0;
  double harmonic = 1.0;
  std::vector<PowerTerm> terms;
  std::vector<PoleTerm> poles;

  double centrifugal() const { return ell * (ell + 1.0); }

  /// alpha = ell + 1/2, the index of the small-x exponents x^{1/2 +- alpha}.
  double alpha() const { return ell + 0.5; }

  bool asymptotically_harmonic() const {
    if (harmonic == 0.0) return false;
    for (const auto& t : terms) {
      if (t.g == cplx{} ) continue;
      const double b = t.beta.value();
      if (!(b > -2.0 && b < 2.0)) return false;
    }
    return true;
  }

  /// Dominant power at infinity: V ~ coefficient * x^exponent (x convention).
  struct Dominant {
    double exponent;
    cplx coefficient;
  };
  Dominant dominant() const {
    Dominant d{2.0, cplx(harmonic, 0.0)};
    if (harmonic == 0.0) d = {-1e300, {}};
    for (const auto& t : terms) {
      if (t.g == cplx{}) continue;
      const double b = t.beta.value();
      if (b > d.exponent) d = {b, t.g * std::polar(1.0, b * pi / 2)};
      else if (b == d.exponent) d.coefficient += t.g * std::polar(1.0, b * pi / 2);
    }
    return d;
  }

  PowerLawPotential& add_term(RationalExponent beta, cplx g) {
    terms.push_back({beta, g});
    return *this;
  }
};

namespace detail {

inline void check_regular_point(const PowerLawPotential& v, const SheetPoint& p, cplx x) {
  if (p.modulus == 0.0) {
    if (v.centrifugal() != 0.0) throw SingularityError("centrifugal term ell(ell+1)/x^2 is singular at x = 0");
    for (const auto& t : v.terms) {
      if (t.g != cplx{} && t.beta.value() < 0.0)
        throw SingularityError("term (ix)^" + t.beta.str() + " is singular at x = 0");
    }
    throw SingularityError("evaluation at the branch point x = 0");
  }
  for (const auto& pole : v.poles) {
    if (std::abs(x - pole.location) <= 1e-14 * (1.0 + std::abs(pole.location))) {
      std::ostringstream os;
      os << "pole term G/(x-c)^2 with c = " << pole.location << " is singular at x";
      throw SingularityError(os.str());
    }
  }
}

}  // namespace detail

/// Sheet-aware evaluation; (ix) carries the argument shifted by pi/2.
inline cplx eval(const PowerLawPotential& v, const SheetPoint& p) {
  const cplx x = p.value();
  detail::check_regular_point(v, p, x);
  cplx sum = v.harmonic * x * x;
  if (v.ell != 0.0) sum += v.centrifugal() / (x * x);
  const SheetPoint ix = p.rotated(pi / 2);
  for (const auto& t : v.terms) {
    if (t.g != cplx{}) sum += t.g * ix.pow(t.beta.value());
  }
  for (const auto& pole : v.poles) {
    const cplx d = x - pole.location;
    sum += pole.strength / (d * d);
  }
  return sum;
}

/// dV/dx at a sheet point.
inline cplx eval_derivative(const PowerLawPotential& v, const SheetPoint& p) {
  const cplx x = p.value();
  detail::check_regular_point(v, p, x);
  cplx sum = 2.0 * v.harmonic * x;
  if (v.ell != 0.0) sum += -2.0 * v.centrifugal() / (x * x * x);
  const SheetPoint ix = p.rotated(pi / 2);
  const cplx i{0.0, 1.0};
  for (const auto& t : v.terms) {
    const double b = t.beta.value();
    if (t.g != cplx{} && b != 0.0) sum += t.g * b * i * ix.pow(b - 1.0);
  }
  for (const auto& pole : v.poles) {
    const cplx d = x - pole.location;
    sum += -2.0 * pole.strength / (d * d * d);
  }
  return sum;
}

/// True iff V(-x*) = V(x)* holds structurally: real couplings and a pole set
/// closed under (c, G) -> (-c*, G*).
inline bool is_pt_symmetric(const PowerLawPotential& v, double tol = 1e-13) {
  for (const auto& t : v.terms) {
    if (std::abs(t.g.imag()) > tol * std::max(1.0, std::abs(t.g))) return false;
  }
  for (const auto& p : v.poles) {
    const cplx c_img = -std::conj(p.location);
    const cplx g_img = std::conj(p.strength);
    bool found = false;
    for (const auto& q : v.poles) {
      if (std::abs(q.location - c_img) <= tol * (1.0 + std::abs(c_img)) &&
          std::abs(q.strength - g_img) <= tol * (1.0 + std::abs(g_img))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Angular sector (lo, hi) for index k in which the decaying Gaussian lives.
struct Wedge {
  int k;
  double lo;
  double hi;
  bool contains(double theta) const { return theta > lo && theta < hi; }
};

/// Sectors k*pi + theta in (-pi/4, pi/4) (shifted for a non-positive harmonic
/// coefficient) for k in [k_min, k_max].
inline std::vector<Wedge> asymptotic_wedges(const PowerLawPotential& v, int k_min = -2, int k_max = 3) {
  if (v.harmonic == 0.0) throw InvalidArgument("asymptotic wedges need a nonzero harmonic coefficient");
  const double center = -std::arg(cplx(v.harmonic, 0.0)) / 4.0;
  std::vector<Wedge> out;
  for (int k = k_min; k <= k_max; ++k)
    out.push_back({k, center - pi / 4 - k * pi, center + pi / 4 - k * pi});
  return out;
}

}  // namespace toboggan
