#include <gtest/gtest.h>

#include <cmath>

#include "support/generators.hpp"
#include "toboggan/sheet_point.hpp"
#include "toboggan/specfun.hpp"

using namespace toboggan;
using toboggan::testing::Rng;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Gamma, KnownValues) {
  EXPECT_NEAR(rel(toboggan::gamma(5.0), 24.0), 0.0, 1e-14);
  EXPECT_NEAR(rel(toboggan::gamma(0.5), std::sqrt(pi)), 0.0, 1e-14);
  EXPECT_NEAR(rel(toboggan::gamma(-0.5), -2.0 * std::sqrt(pi)), 0.0, 1e-14);
  // |Gamma(i)|^2 = pi / sinh(pi)
  EXPECT_NEAR(std::norm(toboggan::gamma(cplx(0, 1))), pi / std::sinh(pi), 1e-14);
}

TEST(Gamma, PolesAndReciprocalZeros) {
  for (int k = 0; k < 6; ++k) {
    EXPECT_THROW(toboggan::gamma(cplx(-k)), SingularityError);
    EXPECT_EQ(reciprocal_gamma(cplx(-k)), cplx(0.0));
  }
  EXPECT_NEAR(rel(reciprocal_gamma(4.0), 1.0 / 6.0), 0.0, 1e-15);
}

TEST(Gamma, RecurrenceProperty) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const cplx z(rng.uniform(-6, 6), rng.uniform(-4, 4));
    EXPECT_LT(rel(toboggan::gamma(z + 1.0), z * gamma(z)), 1e-12) << z;
  }
}

TEST(Gamma, ReflectionProperty) {
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const cplx z(rng.uniform(-6, 6), rng.uniform(-3, 3));
    const cplx lhs = toboggan::gamma(z) * toboggan::gamma(1.0 - z);
    const cplx rhs = pi / std::sin(pi * z);
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-9) << z;
  }
}

TEST(Kummer, ElementaryCases) {
  const cplx z(0.7, -1.2);
  EXPECT_LT(rel(kummer_m(1.0, 1.0, z), std::exp(z)), 1e-14);
  EXPECT_LT(rel(kummer_m(1.0, 2.0, z), (std::exp(z) - 1.0) / z), 1e-14);
  EXPECT_EQ(kummer_m(0.0, 3.0, z), cplx(1.0));
}

TEST(Kummer, PolynomialCaseMatchesLaguerre) {
  // L_n^{(a)}(z) = binom(n + a, n) M(-n, a + 1, z)
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.integer(0, 12);
    const double a = rng.uniform(-0.9, 3.0);
    const cplx z(rng.uniform(-40, 40), rng.uniform(-40, 40));
    double binom = 1.0;
    for (int j = 1; j <= n; ++j) binom *= (a + j) / j;
    const cplx l = laguerre(n, a, z);
    EXPECT_LT(std::abs(binom * kummer_m(cplx(-n), a + 1.0, z) - l) / std::max(1.0, std::abs(l)), 1e-9);
  }
}

TEST(Kummer, TransformationProperty) {
  Rng rng(34);
  for (int i = 0; i < 1000; ++i) {
    const cplx a(rng.uniform(-3, 3), rng.uniform(-1, 1));
    const cplx b(rng.uniform(0.3, 4), rng.uniform(-1, 1));
    const cplx z = std::polar(rng.uniform(0.0, 60.0), rng.uniform(-pi, pi));
    const cplx lhs = kummer_m(a, b, z);
    const cplx rhs = std::exp(z) * kummer_m(b - a, b, -z);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    EXPECT_LT(std::abs(lhs - rhs) / scale, 1e-9) << "a=" << a << " b=" << b << " z=" << z;
  }
}

TEST(Kummer, SeriesAndAsymptoticAgreeAtCrossover) {
  Rng rng(35);
  for (int i = 0; i < 100; ++i) {
    const cplx a(rng.uniform(-2, 2), rng.uniform(-1, 1));
    const cplx b(rng.uniform(0.5, 3), 0.0);
    const cplx z = std::polar(40.0, rng.uniform(-pi, pi));
    const cplx s = kummer_m_series(a, b, z);
    const cplx t = kummer_m_asymptotic(a, b, z);
    EXPECT_LT(std::abs(s - t) / std::max(1.0, std::abs(s)), 1e-9);
  }
}

TEST(Kummer, ControlValidation) {
  SeriesControl ctl;
  ctl.relative_tolerance = 1e-18;
  EXPECT_THROW(kummer_m(1.0, 1.0, 1.0, ctl), InvalidArgument);
  ctl = {};
  ctl.max_terms = 0;
  EXPECT_THROW(kummer_m(1.0, 1.0, 1.0, ctl), InvalidArgument);
}

TEST(Laguerre, LowDegrees) {
  const cplx z(1.5, 0.5);
  const double a = 0.3;
  EXPECT_EQ(laguerre(0, a, z), cplx(1.0));
  EXPECT_LT(rel(laguerre(1, a, z), 1.0 + a - z), 1e-15);
  EXPECT_LT(rel(laguerre(2, a, z), 0.5 * (z * z - 2.0 * (a + 2.0) * z + (a + 1.0) * (a + 2.0))), 1e-14);
  EXPECT_THROW(laguerre(-1, a, z), InvalidArgument);
}
