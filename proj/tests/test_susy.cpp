#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support/generators.hpp"
#include "toboggan/susy.hpp"

using namespace toboggan;
using toboggan::testing::Rng;

namespace {

/// x^2 + (alpha^2 - 1/4)/x^2 - E
RationalExpression shifted_oscillator(double alpha, double energy) {
  return RationalExpression::from_partial_fractions(Polynomial(std::vector<cplx>{-energy, 0.0, 1.0}),
                                                    {{0.0, {0.0, alpha * alpha - 0.25}}});
}

std::vector<cplx> levels(const PowerLawForm& f, double lo, double hi) {
  EigenProblem p;
  p.potential = f.potential;
  p.contour = make_straight(0.5);
  p.window_lo = lo - f.energy_offset.real();
  p.window_hi = hi - f.energy_offset.real();
  std::vector<cplx> out;
  for (const auto& r : find_eigenvalues(p)) out.push_back(r.energy + f.energy_offset);
  return out;
}

}  // namespace

TEST(Laguerre, PolynomialCoefficients) {
  // L_2^{(a)}(t) = ((a + 1)(a + 2) - 2(a + 2) t + t^2) / 2
  const Polynomial l = laguerre_polynomial(2, 0.3);
  EXPECT_NEAR(std::abs(l[0] - 0.5 * 1.3 * 2.3), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(l[1] + 2.3), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(l[2] - 0.5), 0.0, 1e-15);
  EXPECT_THROW(laguerre_polynomial(-1, 0.3), InvalidArgument);
}

TEST(Superpotential, GroundStateOfHarmonicSpike) {
  const auto w = superpotential(0, 0.5, QuasiParity::Plus);
  EXPECT_EQ(w.str(), "x - 1/x");
  const auto p = partners(w);
  EXPECT_TRUE(p.plus.equals(RationalExpression::from_partial_fractions(Polynomial(std::vector<cplx>{-1.0, 0.0, 1.0}),
                                                                       {{0.0, {0.0, 2.0}}})));
  EXPECT_TRUE(p.minus.equals(RationalExpression(Polynomial(std::vector<cplx>{-3.0, 0.0, 1.0}))));
  const auto f = to_power_law(p.plus);
  EXPECT_NEAR(f.potential.ell, 1.0, 1e-12);
  EXPECT_EQ(f.potential.harmonic, 1.0);
  EXPECT_NEAR(std::abs(f.energy_offset + 1.0), 0.0, 1e-12);
}

TEST(Superpotential, GaussianStateFormMatchesClosedForm) {
  Rng rng(91);
  for (int i = 0; i < 30; ++i) {
    const int n = rng.integer(0, 5);
    const double alpha = rng.uniform(0.1, 2.4);
    const QuasiParity q = rng.integer(0, 1) ? QuasiParity::Plus : QuasiParity::Minus;
    EXPECT_TRUE(superpotential(oscillator_state(n, alpha, q)).equals(superpotential(n, alpha, q), 1e-8));
  }
}

TEST(Partners, MinusPartnerIsShiftedOscillator) {
  // W^2 - W' = V - E_n for every state of the spiked oscillator
  for (int n = 1; n <= 10; ++n)
    for (QuasiParity q : {QuasiParity::Plus, QuasiParity::Minus}) {
      const double alpha = 0.3;
      const auto w = superpotential(n, alpha, q);
      const auto p = partners(w);
      EXPECT_TRUE(p.minus.equals(shifted_oscillator(alpha, oracle_ptsqm(n, alpha, q)), 1e-8)) << "n=" << n;
      EXPECT_TRUE((p.plus - p.minus).equals(w.derivative() * RationalExpression(2.0), 1e-8));
    }
}

TEST(Partners, PointwiseIdentityProperty) {
  Rng rng(92);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(0, 4);
    const double alpha = rng.uniform(0.1, 2.4);
    const QuasiParity q = rng.integer(0, 1) ? QuasiParity::Plus : QuasiParity::Minus;
    const auto w = superpotential(n, alpha, q);
    const cplx x(rng.uniform(0.5, 3.0), rng.uniform(-1.5, -0.5));
    const double h = 1e-5;
    const cplx dw = (w(x + h) - w(x - h)) / (2 * h);
    const cplx vp = partners(w).plus(x);
    EXPECT_LT(std::abs(vp - (w(x) * w(x) + dw)), 1e-6 * (1.0 + std::abs(vp)));
  }
}

TEST(ToPowerLaw, RejectsHigherOrderPoles) {
  const auto v = RationalExpression::from_partial_fractions(Polynomial(), {{0.0, {0.0, 0.0, 1.0}}});
  try {
    to_power_law(v);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(std::string(e.what()), "pole of order 3 at x = 0");
  }
  EXPECT_THROW(to_power_law(RationalExpression(Polynomial::monomial(4))), InvalidArgument);
  EXPECT_THROW(to_power_law(RationalExpression::from_partial_fractions(Polynomial(), {{1.0, {1.0}}})),
               InvalidArgument);
}

TEST(ToPowerLaw, OffOriginPolesKeptAsPoleTerms) {
  // n = 1, q = - pairs two poles at +-x0 placed symmetrically under x -> -conj(x)
  const auto p = partners(superpotential(1, 0.3, QuasiParity::Minus));
  const auto f = to_power_law(p.plus);
  ASSERT_EQ(f.potential.poles.size(), 2u);
  EXPECT_NEAR(std::abs(f.potential.poles[0].location + std::conj(f.potential.poles[1].location)), 0.0, 1e-10);
  for (const auto& pole : f.potential.poles) EXPECT_NEAR(std::abs(pole.strength - 2.0), 0.0, 1e-9);
}

TEST(PartnerSpectrum, GroundStateRemoved) {
  const auto p = partners(superpotential(0, 0.5, QuasiParity::Plus));
  const auto plus = levels(to_power_law(p.plus), -3.0, 11.0);
  const auto minus = levels(to_power_law(p.minus), -3.0, 11.0);
  // V- = x^2 - 3 keeps the zero mode; V+ shares the rest
  ASSERT_EQ(minus.size(), plus.size() + 1);
  std::size_t j = 0;
  for (const auto& e : minus) {
    if (std::abs(e) < 1e-6) continue;
    EXPECT_LT(std::abs(plus[j++] - e), 1e-6);
  }
}

TEST(PartnerSpectrum, ExcitedStateWithOffOriginPoles) {
  const double alpha = 0.3;
  const double e1 = oracle_ptsqm(1, alpha, QuasiParity::Minus);
  const auto p = partners(superpotential(1, alpha, QuasiParity::Minus));
  const auto plus = levels(to_power_law(p.plus), -5.0, 7.0);
  std::vector<double> want;
  for (int n = 0; n < 10; ++n)
    for (QuasiParity q : {QuasiParity::Minus, QuasiParity::Plus}) {
      const double e = oracle_ptsqm(n, alpha, q) - e1;
      if (e >= -5.0 && e <= 7.0 && std::abs(e) > 1e-9) want.push_back(e);
    }
  std::sort(want.begin(), want.end());
  ASSERT_EQ(plus.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_LT(std::abs(plus[k] - want[k]), 1e-6);
}
