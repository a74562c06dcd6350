#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "toboggan/errors.hpp"
#include "toboggan/sheet_point.hpp"

namespace toboggan {

/// Polynomial in x with complex coefficients, lowest degree first.
/// Coefficients below prune_tolerance times the largest one are dropped.
class Polynomial {
 public:
  static constexpr double prune_tolerance = 1e-13;

  Polynomial() = default;
  Polynomial(cplx constant) : c_{constant} { prune(); }
  Polynomial(double constant) : Polynomial(cplx(constant)) {}
  explicit Polynomial(std::vector<cplx> coefficients) : c_(std::move(coefficients)) { prune(); }

  static Polynomial x() { return Polynomial(std::vector<cplx>{0.0, 1.0}); }
  static Polynomial monomial(int k, cplx coefficient = 1.0) {
    std::vector<cplx> c(k + 1, 0.0);
    c[k] = coefficient;
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cplx>& coefficients() const { return c_; }
  cplx operator[](int k) const { return k >= 0 && k <= degree() ? c_[k] : cplx{}; }
  cplx leading() const { return is_zero() ? cplx{} : c_.back(); }

  double norm() const {
    double m = 0.0;
    for (const auto& a : c_) m = std::max(m, std::abs(a));
    return m;
  }

  cplx operator()(cplx x) const {
    cplx r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  Polynomial derivative() const {
    std::vector<cplx> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(double(k) * c_[k]);
    return Polynomial(std::move(d));
  }

  /// Lowest power with a nonzero coefficient (0 for the zero polynomial).
  int valuation() const {
    for (int k = 0; k <= degree(); ++k)
      if (c_[k] != cplx{}) return k;
    return 0;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<cplx> r = a.c_;
    for (auto& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }

  /// Quotient and remainder; the remainder is pruned relative to the dividend.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
    if (a.degree() < b.degree()) return {{}, a};
    std::vector<cplx> r = a.c_;
    std::vector<cplx> q(a.degree() - b.degree() + 1, 0.0);
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      const cplx t = r[k + b.degree()] / b.leading();
      q[k] = t;
      for (int j = 0; j <= b.degree(); ++j) r[k + j] -= t * b.c_[j];
    }
    r.resize(b.degree());
    Polynomial rem;
    rem.c_ = std::move(r);
    rem.prune(a.norm());
    return {Polynomial(std::move(q)), rem};
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    std::vector<cplx> r = c_;
    const cplx l = leading();
    for (auto& v : r) v /= l;
    return Polynomial(std::move(r));
  }

  /// Roots from the eigenvalues of the companion matrix.
  std::vector<cplx> roots() const {
    const int n = degree();
    if (n < 1) return {};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) m(k, k - 1) = 1.0;
    for (int k = 0; k < n; ++k) m(k, n - 1) = -c_[k] / leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return r;
  }

  std::string str(const std::string& var = "x") const;

 private:
  void prune(double scale = 0.0) {
    const double cut = prune_tolerance * std::max(scale, norm());
    for (auto& a : c_) {
      if (std::abs(a.real()) <= cut) a.real(0.0);
      if (std::abs(a.imag()) <= cut) a.imag(0.0);
    }
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
  }

  std::vector<cplx> c_;
};

/// Monic greatest common divisor by Euclid on monic remainders; a remainder
/// below 1e-9 of its divisor counts as zero.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    if (r.norm() <= 1e-9 * std::max(1.0, b.norm())) r = {};
    a = std::move(b);
    b = r.monic();
  }
  return a.is_zero() ? Polynomial(1.0) : a;
}

/// a / g when g divides a to 1e-9 relative accuracy.
inline std::optional<Polynomial> exact_quotient(const Polynomial& a, const Polynomial& g) {
  auto [q, r] = divmod(a, g);
  if (r.norm() > 1e-9 * std::max(1.0, a.norm())) return std::nullopt;
  return q;
}

namespace detail {

inline std::string format_coefficient(cplx a) {
  char buf[96];
  if (a.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.15g", a.real());
  } else if (a.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.15gi", a.imag());
  } else {
    std::snprintf(buf, sizeof buf, "(%.15g%+.15gi)", a.real(), a.imag());
  }
  return buf;
}

/// Renders sum_k a_k var^{k + shift}; negative powers print as c/var^k.
inline std::string format_laurent(const std::vector<cplx>& c, int shift, const std::string& var) {
  std::string out;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    cplx a = c[k];
    if (a == cplx{}) continue;
    const int e = k + shift;
    bool negative = a.imag() == 0.0 && a.real() < 0.0;
    if (negative) a = -a;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const bool unit = a == cplx(1.0);
    if (e == 0) {
      out += format_coefficient(a);
    } else if (e > 0) {
      if (!unit) out += format_coefficient(a) + "*";
      out += var;
      if (e > 1) out += "^" + std::to_string(e);
    } else {
      out += format_coefficient(a) + "/" + var;
      if (e < -1) out += "^" + std::to_string(-e);
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

inline std::string Polynomial::str(const std::string& var) const { return detail::format_laurent(c_, 0, var); }

/// Deflates p by (x - c), dropping the remainder.
inline Polynomial deflate(const Polynomial& p, cplx c) {
  const int n = p.degree();
  if (n < 1) return {};
  std::vector<cplx> q(n);
  cplx acc = 0.0;
  for (int k = n; k >= 1; --k) {
    acc = acc * c + p[k];
    q[k - 1] = acc;
  }
  return Polynomial(std::move(q));
}

/// Coefficients t_m of p(c + u) = sum t_m u^m.
inline std::vector<cplx> taylor_at(const Polynomial& p, cplx c) {
  std::vector<cplx> t(std::max(0, p.degree() + 1));
  std::vector<cplx> w = p.coefficients();
  for (std::size_t m = 0; m < t.size(); ++m) {
    // synthetic division by (x - c): remainder is the next Taylor coefficient
    cplx acc = 0.0;
    for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k) {
      const cplx next = acc * c + w[k];
      w[k] = acc;
      acc = next;
    }
    t[m] = acc;
    if (!w.empty()) w.pop_back();
  }
  return t;
}

/// (x - c)^k.
inline Polynomial shifted_power(cplx c, int k) {
  Polynomial r(1.0);
  for (int j = 0; j < k; ++j) r = r * Polynomial(std::vector<cplx>{-c, 1.0});
  return r;
}

/// Principal part sum_j coeff[j-1] / (x - at)^j of a rational expression.
struct FractionPole {
  cplx at;
  std::vector<cplx> coeff;
  int order() const { return static_cast<int>(coeff.size()); }
};

/// Rational function kept in partial fractions: a polynomial part plus the
/// principal part at every pole. Sums, products and derivatives act on
/// these coefficients directly, so no high-degree numerator is ever formed
/// and cancelling poles cancel coefficientwise. Coefficients below 1e-10 of
/// the largest one are dropped.
class RationalExpression {
 public:
  RationalExpression() = default;
  RationalExpression(Polynomial p) : poly_(std::move(p)) {}
  RationalExpression(double c) : poly_(c) {}

  /// num/den through the companion roots of den; a root of multiplicity m
  /// splits by about eps^{1/m}, so roots within 1e-3 relative are merged.
  RationalExpression(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) throw InvalidArgument("rational expression with zero denominator");
    const int v = den.valuation();
    const Polynomial rest(std::vector<cplx>(den.coefficients().begin() + v, den.coefficients().end()));
    std::vector<std::pair<cplx, int>> cl;
    if (v > 0) cl.push_back({0.0, v});
    for (const auto& z : rest.roots()) {
      bool merged = false;
      for (auto& [c, m] : cl) {
        if (std::abs(z - c) <= 1e-3 * (1.0 + std::abs(c))) {
          c = (c * double(m) + z) / double(m + 1);
          ++m;
          merged = true;
          break;
        }
      }
      if (!merged) cl.push_back({z, 1});
    }
    poly_ = divmod(num, den).first;
    for (const auto& [c, m] : cl) {
      // principal part at c: Taylor series of num / other factors, first m terms
      Polynomial other(den.leading());
      for (const auto& [c2, m2] : cl)
        if (c2 != c) other = other * shifted_power(c2, m2);
      const auto tn = taylor_at(num, c);
      const auto to = taylor_at(other, c);
      std::vector<cplx> q(m, 0.0);
      for (int k = 0; k < m; ++k) {
        cplx acc = k < static_cast<int>(tn.size()) ? tn[k] : cplx{};
        for (int j = 1; j <= k && j < static_cast<int>(to.size()); ++j) acc -= to[j] * q[k - j];
        q[k] = acc / to[0];
      }
      FractionPole f{c, std::vector<cplx>(m)};
      for (int j = 1; j <= m; ++j) f.coeff[j - 1] = q[m - j];
      poles_.push_back(std::move(f));
    }
    prune();
  }

  static RationalExpression from_partial_fractions(Polynomial poly, std::vector<FractionPole> poles) {
    RationalExpression r(std::move(poly));
    for (auto& f : poles) r.add_principal(f.at, f.coeff);
    r.prune();
    return r;
  }

  const Polynomial& polynomial_part() const { return poly_; }
  const std::vector<FractionPole>& fraction_poles() const { return poles_; }

  /// Monic denominator prod (x - c)^order.
  Polynomial denominator() const {
    Polynomial d(1.0);
    for (const auto& f : poles_) d = d * shifted_power(f.at, f.order());
    return d;
  }

  Polynomial numerator() const {
    const Polynomial d = denominator();
    Polynomial n = poly_ * d;
    for (const auto& f : poles_) {
      Polynomial cof(1.0);
      for (const auto& g : poles_)
        if (g.at != f.at) cof = cof * shifted_power(g.at, g.order());
      for (int j = 1; j <= f.order(); ++j) n = n + Polynomial(f.coeff[j - 1]) * cof * shifted_power(f.at, f.order() - j);
    }
    return n;
  }

  cplx operator()(cplx x) const {
    cplx r = poly_(x);
    for (const auto& f : poles_) {
      const cplx u = 1.0 / (x - f.at);
      cplx up = u;
      for (const auto& a : f.coeff) {
        r += a * up;
        up *= u;
      }
    }
    return r;
  }

  RationalExpression derivative() const {
    RationalExpression r(poly_.derivative());
    for (const auto& f : poles_) {
      FractionPole g{f.at, std::vector<cplx>(f.order() + 1, 0.0)};
      for (int j = 1; j <= f.order(); ++j) g.coeff[j] = -double(j) * f.coeff[j - 1];
      r.poles_.push_back(std::move(g));
    }
    r.prune();
    return r;
  }

  friend RationalExpression operator+(const RationalExpression& a, const RationalExpression& b) {
    RationalExpression r = a;
    r.poly_ = a.poly_ + b.poly_;
    for (const auto& f : b.poles_) r.add_principal(f.at, f.coeff);
    r.prune();
    return r;
  }
  friend RationalExpression operator-(const RationalExpression& a) {
    RationalExpression r = a;
    r.poly_ = -a.poly_;
    for (auto& f : r.poles_)
      for (auto& c : f.coeff) c = -c;
    return r;
  }
  friend RationalExpression operator-(const RationalExpression& a, const RationalExpression& b) { return a + (-b); }

  friend RationalExpression operator*(const RationalExpression& a, const RationalExpression& b) {
    RationalExpression r(a.poly_ * b.poly_);
    for (const auto& f : a.poles_) r.add_poly_times_pole(b.poly_, f);
    for (const auto& g : b.poles_) r.add_poly_times_pole(a.poly_, g);
    for (const auto& f : a.poles_)
      for (const auto& g : b.poles_) r.add_pole_product(f, g);
    r.prune();
    return r;
  }

  /// Same polynomial part and principal parts to tol relative to the
  /// largest coefficient involved.
  bool equals(const RationalExpression& o, double tol = 1e-10) const {
    const RationalExpression d = *this - o;
    const double scale = std::max({1.0, magnitude(), o.magnitude()});
    return d.magnitude() <= tol * scale;
  }

  /// Polynomial part, then principal parts; origin poles print as c/x^j.
  std::string str(const std::string& var = "x") const {
    std::string out = poly_.is_zero() ? "" : poly_.str(var);
    for (const auto& f : poles_) {
      const std::string base =
          f.at == cplx{} ? var
                         : "(" + var + (f.at.imag() == 0.0 && f.at.real() < 0.0 ? " + " + detail::format_coefficient(-f.at)
                                                                                 : " - " + detail::format_coefficient(f.at)) +
                               ")";
      for (int j = f.order(); j >= 1; --j) {
        cplx a = f.coeff[j - 1];
        if (a == cplx{}) continue;
        const bool negative = a.imag() == 0.0 && a.real() < 0.0;
        if (negative) a = -a;
        out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        out += detail::format_coefficient(a) + "/" + base + (j > 1 ? "^" + std::to_string(j) : "");
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  static bool same_point(cplx a, cplx b) { return std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)); }

  double magnitude() const {
    double m = poly_.norm();
    for (const auto& f : poles_)
      for (const auto& c : f.coeff) m = std::max(m, std::abs(c));
    return m;
  }

  FractionPole& pole_at(cplx c) {
    for (auto& f : poles_)
      if (same_point(f.at, c)) return f;
    poles_.push_back({c, {}});
    return poles_.back();
  }

  void add_principal(cplx c, const std::vector<cplx>& coeff) {
    auto& f = pole_at(c);
    if (f.coeff.size() < coeff.size()) f.coeff.resize(coeff.size(), 0.0);
    for (std::size_t j = 0; j < coeff.size(); ++j) f.coeff[j] += coeff[j];
  }

  void add_term(cplx c, int j, cplx a) {
    std::vector<cplx> v(j, 0.0);
    v[j - 1] = a;
    add_principal(c, v);
  }

  /// p(x) * A_j/(x - c)^j with p = sum t_m (x - c)^m.
  void add_poly_times_pole(const Polynomial& p, const FractionPole& f) {
    const auto t = taylor_at(p, f.at);
    for (int j = 1; j <= f.order(); ++j) {
      const cplx a = f.coeff[j - 1];
      if (a == cplx{}) continue;
      for (int m = 0; m < static_cast<int>(t.size()); ++m) {
        if (t[m] == cplx{}) continue;
        if (m < j) {
          add_term(f.at, j - m, t[m] * a);
        } else {
          poly_ = poly_ + Polynomial(t[m] * a) * shifted_power(f.at, m - j);
        }
      }
    }
  }

  /// A/(x-a)^i * B/(x-b)^j; for a != b each factor is expanded about the
  /// other's pole: 1/(x-b)^j = sum_k C(j+k-1, k) (-1)^k (a-b)^{-j-k} (x-a)^k.
  void add_pole_product(const FractionPole& f, const FractionPole& g) {
    const bool same = same_point(f.at, g.at);
    for (int i = 1; i <= f.order(); ++i) {
      const cplx A = f.coeff[i - 1];
      if (A == cplx{}) continue;
      for (int j = 1; j <= g.order(); ++j) {
        const cplx B = g.coeff[j - 1];
        if (B == cplx{}) continue;
        if (same) {
          add_term(f.at, i + j, A * B);
          continue;
        }
        split(f.at, i, g.at, j, A * B);
        split(g.at, j, f.at, i, A * B);
      }
    }
  }

  /// Part of w/((x-a)^i (x-b)^j) singular at a.
  void split(cplx a, int i, cplx b, int j, cplx w) {
    const cplx d = a - b;
    double binom = 1.0;  // C(j+k-1, k)
    for (int k = 0; k < i; ++k) {
      if (k > 0) binom *= double(j + k - 1) / k;
      add_term(a, i - k, w * binom * ((k % 2) ? -1.0 : 1.0) * std::pow(d, -(j + k)));
    }
  }

  void prune() {
    const double cut = 1e-10 * std::max(1.0, magnitude());
    for (auto& f : poles_) {
      for (auto& c : f.coeff)
        if (std::abs(c) <= cut) c = 0.0;
      while (!f.coeff.empty() && f.coeff.back() == cplx{}) f.coeff.pop_back();
    }
    std::erase_if(poles_, [](const FractionPole& f) { return f.coeff.empty(); });
  }

  Polynomial poly_;
  std::vector<FractionPole> poles_;
};

}  // namespace toboggan
