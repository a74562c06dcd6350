// One [PASS]/[FAIL] line per acceptance criterion; nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "toboggan/toboggan.hpp"

using namespace toboggan;
using toboggan::testing::Rng;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

EigenProblem oscillator(double alpha, Contour c, double lo = 0.0, double hi = 12.0) {
  EigenProblem p;
  p.potential.ell = alpha - 0.5;
  p.contour = std::move(c);
  p.window_lo = lo;
  p.window_hi = hi;
  return p;
}

std::vector<double> oracle_levels(double alpha, double lo, double hi) {
  std::vector<double> out;
  for (int n = 0; n < 100; ++n)
    for (QuasiParity q : {QuasiParity::Minus, QuasiParity::Plus}) {
      const double e = oracle_ptsqm(n, alpha, q);
      if (e >= lo && e <= hi) out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest distance between two spectra of equal length, or infinity.
double level_distance(const std::vector<EigenResult>& rs, const std::vector<double>& want) {
  if (rs.size() != want.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].converged) return INFINITY;
    worst = std::max(worst, std::abs(rs[i].energy - want[i]));
  }
  return worst;
}

Verdict ac1() {
  double worst = 0.0, slowest = 0.0;
  for (double alpha : {0.5, 0.3, 1.7})
    for (double eps : {0.05, 1.0}) {
      const auto t0 = Clock::now();
      const auto rs = find_eigenvalues(oscillator(alpha, make_straight(eps)));
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, level_distance(rs, oracle_levels(alpha, 0.0, 12.0)));
    }
  return {worst <= 1e-6 && slowest < 10.0,
          fmt("max |E - (4n+2+-2a)| = %.2e (tol 1e-6)", worst) + fmt(", slowest case %.2f s (limit 10 s)", slowest)};
}

Verdict ac2() {
  double worst = 0.0;
  for (int ell : {0, 1}) {
    const auto rs = find_eigenvalues(oscillator(ell + 0.5, make_half_line(1e-3, 8.0)));
    std::vector<double> want;
    for (int n = 0; oracle_tqm(n, ell) <= 12.0; ++n) want.push_back(oracle_tqm(n, ell));
    worst = std::max(worst, level_distance(rs, want));
  }
  return {worst <= 1e-6, fmt("half-line max |E - (4n+2l+3)| = %.2e (tol 1e-6)", worst)};
}

Verdict ac3() {
  double worst = 0.0;
  for (double alpha : {0.5, 0.3, 1.7}) {
    const auto ref = find_eigenvalues(oscillator(alpha, make_straight(0.05)));
    std::vector<double> ref_e;
    for (const auto& r : ref) ref_e.push_back(r.energy.real());
    for (double eps : {0.5, 1.0}) worst = std::max(worst, level_distance(find_eigenvalues(oscillator(alpha, make_straight(eps))), ref_e));
  }
  return {worst <= 1e-6, fmt("max spread over eps in {0.05, 0.5, 1} = %.2e (tol 1e-6)", worst)};
}

Verdict ac4() {
  const auto t0 = Clock::now();
  EigenProblem p;
  p.potential.ell = 0.3;
  p.potential.add_term(RationalExponent(1), 0.1);
  p.contour = make_toboggan(1, 0.5);
  p.window_lo = -1.0;
  p.window_hi = 10.0;
  const auto direct = find_eigenvalues(p);
  const auto lt = transform(p, RationalExponent(2), true);
  const auto pulled = pull_back_energy(lt.map, find_target_couplings(lt));
  const double elapsed = seconds_since(t0);
  double worst = direct.size() >= 4 ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min<std::size_t>(4, direct.size()); ++i) {
    double best = INFINITY;
    for (const auto& q : pulled) best = std::min(best, std::abs(q.energy - direct[i].energy));
    worst = std::max(worst, best);
  }
  return {worst <= 1e-5 && elapsed < 60.0 && lt.map.target_winding == 0,
          fmt("lowest 4 levels, max |direct - pulled back| = %.2e (tol 1e-5)", worst) +
              fmt(", %.2f s (limit 60 s)", elapsed)};
}

/// |W(s) - W(0)| over the largest cancellation scale |u w'| + |u' w| seen up to s.
double wronskian_drift(const std::vector<std::array<cplx, 2>>& u, const std::vector<std::array<cplx, 2>>& w) {
  const cplx w0 = u[0][0] * w[0][1] - u[0][1] * w[0][0];
  double scale = std::abs(w0), worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    scale = std::max(scale, std::abs(u[i][0] * w[i][1]) + std::abs(u[i][1] * w[i][0]));
    worst = std::max(worst, std::abs(u[i][0] * w[i][1] - u[i][1] * w[i][0] - w0) / scale);
  }
  return worst;
}

Verdict ac5() {
  const Contour c = make_toboggan(1, 0.5);
  double vertex = 0.0;
  for (double alpha : {0.3, 1.7})
    for (int n : {0, 1, 2})
      for (QuasiParity q : {QuasiParity::Plus, QuasiParity::Minus}) {
        PowerLawPotential v;
        v.ell = alpha - 0.5;
        const double E = oracle_ptsqm(n, alpha, q);
        auto exact = [&](const SheetPoint& p) {
          return state_at(p, std::log(oracle_wavefunction(n, alpha, q, p)), oracle_log_derivative(n, alpha, q, p));
        };
        const cplx y = oracle_log_derivative(n, alpha, q, c.vertex_point());
        const auto l = transport(v, E, c, 0, c.vertex, exact(c.front()));
        const auto r = transport(v, E, c, c.size() - 1, c.vertex, exact(c.back()));
        vertex = std::max({vertex, std::abs(l.log_derivative - y) / std::max(1.0, std::abs(y)),
                           std::abs(r.log_derivative - y) / std::max(1.0, std::abs(y))});
      }
  StepControl tight;
  tight.relative_tolerance = 1e-13;
  tight.absolute_tolerance = 1e-14;
  double drift = 0.0;
  for (double alpha : {0.3, 1.7}) {
    PowerLawPotential v;
    v.ell = alpha - 0.5;
    const std::pair<std::size_t, std::size_t> legs[] = {{0, c.size() - 1}, {c.vertex, 0}, {c.vertex, c.size() - 1}};
    for (const auto& [from, to] : legs) {
      std::vector<std::array<cplx, 2>> u, w;
      transport_linear(v, 3.1, c, from, to, {1.0, 0.0}, tight, &u);
      transport_linear(v, 3.1, c, from, to, {0.0, 1.0}, tight, &w);
      drift = std::max(drift, wronskian_drift(u, w));
    }
  }
  return {vertex <= 1e-7 && drift <= 1e-8,
          fmt("vertex psi'/psi error %.2e (tol 1e-7)", vertex) + fmt(", Wronskian drift %.2e (tol 1e-8)", drift)};
}

Verdict ac6() {
  Rng rng(606);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double alpha = rng.uniform(0.01, 3.0);
    const QuasiParity q = i % 2 ? QuasiParity::Plus : QuasiParity::Minus;
    const double sa = q == QuasiParity::Plus ? alpha : -alpha;
    const SheetPoint p(rng.uniform(0.2, 3.0), rng.uniform(-4.0, 4.0));
    const cplx ratio = oracle_wavefunction(1, alpha, q, p.rotated(2 * pi)) / oracle_wavefunction(1, alpha, q, p);
    worst = std::max(worst, std::abs(ratio - std::polar(1.0, 2 * pi * (0.5 + sa))));
  }
  return {worst <= 1e-12, fmt("100 random alpha, max |ratio - e^{2 pi i (1/2 +- a)}| = %.2e (tol 1e-12)", worst)};
}

Verdict ac7() {
  double amp = 0.0, slope = 0.0;
  int points = 0;
  for (double alpha : {0.15, 0.35, 0.55, 0.75, 0.9})
    for (double mu : {0.4, 1.1, 1.7, 2.6}) {
      ScatterProblem p;
      p.alpha = alpha;
      p.energy = 2.0 * mu;
      p.branch = points % 2 ? Edge::Upper : Edge::Lower;
      PowerLawPotential v;
      v.ell = alpha - 0.5;
      const auto a = analytic_amplitudes(p);
      const auto n = numerical_amplitudes(v, p);
      amp = std::max({amp, std::abs(a.backward - n.backward) / std::max(1.0, std::abs(a.backward)),
                      std::abs(a.forward - n.forward) / std::max(1.0, std::abs(a.forward))});
      slope = std::max(slope, std::abs(n.distortion_exponent - mu / 2.0) / (mu / 2.0));
      ++points;
    }
  return {points == 20 && amp <= 1e-4 && slope <= 0.02,
          std::to_string(points) + " points" + fmt(", max amplitude mismatch %.2e (tol 1e-4)", amp) +
              fmt(", max distortion slope error %.2f%% (tol 2%%)", 100.0 * slope)};
}

Verdict ac8() {
  const auto es = resonance_energies(3.5, 10);
  bool ok = es == std::vector<double>{5.0, 1.0};
  double worst = 0.0;
  for (double e : es) {
    ScatterProblem p;
    p.alpha = 3.5;
    p.energy = e;
    const auto r = analytic_amplitudes(p);
    ok = ok && r.resonance;
    worst = std::max(worst, r.resonance_proximity);
  }
  return {ok && worst <= 1e-14, std::string("resonances {5, 1} ") + (ok ? "flagged" : "not flagged") +
                                     fmt(", max |1/Gamma| = %.1e (tol 1e-14)", worst)};
}

Verdict ac9() {
  struct Row {
    int N;
    Edge e;
    double in, out;
  };
  const Row rows[] = {{0, Edge::Lower, -0.75 * pi, -0.25 * pi},
                      {1, Edge::Lower, -1.75 * pi, 0.75 * pi},
                      {0, Edge::Upper, -1.25 * pi, 0.25 * pi},
                      {1, Edge::Upper, -2.25 * pi, 1.25 * pi}};
  int exact = 0;
  for (const auto& r : rows) {
    const auto a = make_anti_stokes(r.N, r.e);
    exact += a.theta_in == r.in && a.path.front().argument == r.in;
    exact += a.theta_out == r.out && a.path.back().argument == r.out;
  }
  return {exact == 8, std::to_string(exact) + "/8 ray angles exact"};
}

Verdict ac10() {
  const auto w = superpotential(0, 0.5, QuasiParity::Plus);
  const auto pp = partners(w);
  const auto want = RationalExpression::from_partial_fractions(Polynomial(std::vector<cplx>{-1.0, 0.0, 1.0}),
                                                               {{0.0, {0.0, 2.0}}});
  const bool symbolic = w.str() == "x - 1/x" && pp.plus.equals(want) && pp.plus.str() == "x^2 - 1 + 2/x^2";
  const auto form = to_power_law(pp.plus);
  EigenProblem p;
  p.potential = form.potential;
  p.contour = make_straight(0.5);
  p.window_lo = -3.0 - form.energy_offset.real();
  p.window_hi = 11.0 - form.energy_offset.real();
  std::vector<EigenResult> rs = find_eigenvalues(p);
  for (auto& r : rs) r.energy += form.energy_offset;
  // x^2 + 2/x^2 is the alpha = 3/2 oscillator: 4n + 2 +- 3, then shifted by -1
  std::vector<double> known;
  for (double e : oracle_levels(1.5, -2.0, 12.0))
    if (e - 1.0 >= -3.0 && e - 1.0 <= 11.0) known.push_back(e - 1.0);
  const double worst = level_distance(rs, known);
  return {symbolic && worst <= 1e-6, "V+ = " + pp.plus.str() + fmt(", shifted spectrum error %.2e (tol 1e-6)", worst)};
}

Verdict ac11() {
  Rng rng(1111);
  double kummer = 0.0, reflection = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cplx a(rng.uniform(-3, 3), rng.uniform(-1, 1));
    const cplx b(rng.uniform(0.3, 4), rng.uniform(-1, 1));
    const cplx z = std::polar(rng.uniform(0.0, 60.0), rng.uniform(-pi, pi));
    const cplx lhs = kummer_m(a, b, z);
    const cplx rhs = std::exp(z) * kummer_m(b - a, b, -z);
    kummer = std::max(kummer, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    const cplx s(rng.uniform(-6, 6), rng.uniform(-3, 3));
    const cplx g = toboggan::gamma(s) * toboggan::gamma(1.0 - s);
    const cplx r = pi / std::sin(pi * s);
    reflection = std::max(reflection, std::abs(g - r) / std::abs(r));
  }
  return {kummer <= 1e-9 && reflection <= 1e-9,
          fmt("1000 samples, Kummer %.2e", kummer) + fmt(", reflection %.2e (tol 1e-9)", reflection)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> checks{
      {"AC1 exact spectrum on straight contours", ac1},  {"AC2 Hermitian half-line oracle", ac2},
      {"AC3 deformation invariance", ac3},                {"AC4 Liouville equivalence", ac4},
      {"AC5 integrator fidelity", ac5},                   {"AC6 branch-sheet factor", ac6},
      {"AC7 scattering cross-validation", ac7},           {"AC8 resonance condition", ac8},
      {"AC9 anti-Stokes geometry", ac9},                  {"AC10 SUSY pipeline", ac10},
      {"AC11 special-function identities", ac11}};
  int failures = 0;
  for (const auto& [name, check] : checks) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
