#include <gtest/gtest.h>

#include <cmath>

#include "support/generators.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/potential_config.hpp"

using namespace toboggan;
using toboggan::testing::Rng;

namespace {

PowerLawPotential random_pt_potential(Rng& rng) {
  PowerLawPotential v;
  v.ell = rng.uniform(-0.4, 2.0);
  v.harmonic = 1.0;
  const int nt = rng.integer(0, 3);
  for (int k = 0; k < nt; ++k) v.add_term(RationalExponent(rng.integer(-7, 7), rng.integer(1, 4)), rng.uniform(-1, 1));
  if (rng.integer(0, 1)) {
    const cplx c(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0));
    const cplx g(rng.uniform(-1, 1), rng.uniform(-1, 1));
    v.poles.push_back({c, g});
    v.poles.push_back({-std::conj(c), std::conj(g)});
  }
  return v;
}

}  // namespace

TEST(RationalExponent, ParsesAndReduces) {
  EXPECT_EQ(RationalExponent::parse("6/4"), RationalExponent(3, 2));
  EXPECT_EQ(RationalExponent::parse("-2"), RationalExponent(-2));
  EXPECT_EQ(RationalExponent(2, -4).str(), "-1/2");
  EXPECT_THROW(RationalExponent::parse("1/0"), InvalidArgument);
  EXPECT_THROW(RationalExponent::parse("x"), InvalidArgument);
  EXPECT_THROW(RationalExponent::parse("1/2/3"), InvalidArgument);
}

TEST(RationalExponent, Arithmetic) {
  const RationalExponent a(1, 2), b(2, 3);
  EXPECT_EQ(a + b, RationalExponent(7, 6));
  EXPECT_EQ(a - b, RationalExponent(-1, 6));
  EXPECT_EQ(a * b, RationalExponent(1, 3));
  EXPECT_EQ(a / b, RationalExponent(3, 4));
  EXPECT_TRUE(RationalExponent(4, 2).is_even_integer());
  EXPECT_FALSE(RationalExponent(3).is_even_integer());
}

TEST(Potential, EvaluatesEveryTermKind) {
  PowerLawPotential v;
  v.ell = 0.5;
  v.harmonic = 2.0;
  v.add_term(RationalExponent(1), cplx(0.3));
  v.poles.push_back({cplx(1.0, 0.5), cplx(0.2, 0.1)});
  const SheetPoint p(1.3, -0.7);
  const cplx x = p.value();
  const cplx ix = std::polar(1.3, -0.7 + pi / 2);
  const cplx expected = 0.75 / (x * x) + 2.0 * x * x + 0.3 * ix + cplx(0.2, 0.1) / ((x - cplx(1.0, 0.5)) * (x - cplx(1.0, 0.5)));
  EXPECT_NEAR(std::abs(eval(v, p) - expected), 0.0, 1e-13);
}

TEST(Potential, FractionalTermsAreSheetDependent) {
  PowerLawPotential v;
  v.harmonic = 0.0;
  v.add_term(RationalExponent(1, 2), 1.0);
  const SheetPoint p(2.0, 0.4);
  EXPECT_NEAR(std::abs(eval(v, p.rotated(2 * pi)) + eval(v, p)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(eval(v, p.rotated(4 * pi)) - eval(v, p)), 0.0, 1e-13);
}

TEST(Potential, SingularPointsRaise) {
  PowerLawPotential v;
  v.ell = 1.0;
  EXPECT_THROW(eval(v, SheetPoint(0.0, 0.0)), SingularityError);
  PowerLawPotential w;
  w.poles.push_back({cplx(1.0, 0.0), 1.0});
  EXPECT_THROW(eval(w, SheetPoint(1.0, 0.0)), SingularityError);
}

TEST(Potential, PtSymmetryProperty) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const PowerLawPotential v = random_pt_potential(rng);
    ASSERT_TRUE(is_pt_symmetric(v));
    const SheetPoint p(rng.uniform(0.3, 4.0), rng.uniform(-8.0, 8.0));
    const cplx a = eval(v, p.pt_image());
    const cplx b = std::conj(eval(v, p));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-10 * (1.0 + std::abs(b)));
  }
}

TEST(Potential, ComplexCouplingBreaksPt) {
  PowerLawPotential v;
  v.add_term(RationalExponent(1), cplx(0.1, 0.2));
  EXPECT_FALSE(is_pt_symmetric(v));
  PowerLawPotential w;
  w.poles.push_back({cplx(1.0, 0.0), 1.0});
  EXPECT_FALSE(is_pt_symmetric(w));
}

TEST(Potential, DerivativeMatchesFiniteDifference) {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const PowerLawPotential v = random_pt_potential(rng);
    const SheetPoint p(rng.uniform(0.5, 3.0), rng.uniform(-6.0, 6.0));
    const double h = 1e-5;
    const cplx x = p.value();
    const auto at = [&](cplx z) { return eval(v, continue_from(p, z)); };
    const cplx fd = (at(x + h) - at(x - h)) / (2 * h);
    EXPECT_NEAR(std::abs(eval_derivative(v, p) - fd), 0.0, 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST(Potential, WedgesForUnitHarmonic) {
  PowerLawPotential v;
  const auto ws = asymptotic_wedges(v, 0, 1);
  ASSERT_EQ(ws.size(), 2u);
  EXPECT_NEAR(ws[0].lo, -pi / 4, 1e-15);
  EXPECT_NEAR(ws[0].hi, pi / 4, 1e-15);
  EXPECT_TRUE(ws[1].contains(-pi));
  v.harmonic = 0.0;
  EXPECT_THROW(asymptotic_wedges(v), InvalidArgument);
}

TEST(Potential, AsymptoticallyHarmonic) {
  PowerLawPotential v;
  v.add_term(RationalExponent(3, 2), 1.0);
  EXPECT_TRUE(v.asymptotically_harmonic());
  v.add_term(RationalExponent(4), 1.0);
  EXPECT_FALSE(v.asymptotically_harmonic());
}

TEST(Config, ParsesGrammar) {
  const auto v = parse_potential(R"(# spiked oscillator with a cubic kick
ell = 0.3
harmonic = 1
term { beta = "1/2", g = 0.25 }
term { beta = "-1", g = 1, g_im = 2 }
pole { re = 1, im = -0.5, G_re = 0.1, G_im = 0.2 }
)");
  EXPECT_EQ(v.ell, 0.3);
  ASSERT_EQ(v.terms.size(), 2u);
  EXPECT_EQ(v.terms[0].beta, RationalExponent(1, 2));
  EXPECT_EQ(v.terms[1].g, cplx(1, 2));
  ASSERT_EQ(v.poles.size(), 1u);
  EXPECT_EQ(v.poles[0].location, cplx(1, -0.5));
}

TEST(Config, RoundTripProperty) {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    PowerLawPotential v = random_pt_potential(rng);
    v.terms.push_back({RationalExponent(1, 3), cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))});
    const auto w = parse_potential(format_potential(v));
    EXPECT_EQ(format_potential(w), format_potential(v));
    EXPECT_EQ(w.ell, v.ell);
    ASSERT_EQ(w.terms.size(), v.terms.size());
    for (std::size_t k = 0; k < v.terms.size(); ++k) EXPECT_EQ(w.terms[k].g, v.terms[k].g);
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_potential("ell = 0\nterm { g = 1 }\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_potential("mass = 1"), ParseError);
  EXPECT_THROW(parse_potential("ell = abc"), ParseError);
  EXPECT_THROW(parse_potential("term { beta = \"1\", g = 1, h = 2 }"), ParseError);
  EXPECT_THROW(load_potential("/nonexistent/file.cfg"), InvalidArgument);
}
