#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "toboggan/errors.hpp"
#include "toboggan/parallel.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/propagate.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/specfun.hpp"

namespace toboggan {

enum class QuasiParity { Plus, Minus };

inline std::string to_string(QuasiParity q) { return q == QuasiParity::Plus ? "+" : "-"; }

struct EigenLabels {
  int n;
  QuasiParity q;
};

struct EigenResult {
  cplx energy;
  double residual = 0.0;
  int index_hint = 0;
  std::optional<EigenLabels> labels;
  bool converged = true;
};

struct EigenProblem {
  PowerLawPotential potential;
  Contour contour;
  double window_lo = 0.0;
  double window_hi = 12.0;
  int grid_points = 200;
  double refine_tolerance = 1e-9;
  StepControl step;
};

// --- exact harmonic-oscillator oracles -------------------------------------

/// Hermitian radial oscillator on the half-line: 4n + 2 ell + 3.
inline double oracle_tqm(int n, int ell) {
  if (n < 0 || ell < 0) throw InvalidArgument("oracle_tqm needs n >= 0 and ell >= 0");
  return 4.0 * n + 2.0 * ell + 3.0;
}

/// PT-symmetric spiked oscillator: 4n + 2 +- 2 alpha.
inline double oracle_ptsqm(int n, double alpha, QuasiParity q) {
  if (n < 0) throw InvalidArgument("oracle_ptsqm needs n >= 0");
  return 4.0 * n + 2.0 + (q == QuasiParity::Plus ? 2.0 : -2.0) * alpha;
}

/// x^{1/2 +- alpha} e^{-x^2/2} L_n^{(+-alpha)}(x^2), sheet aware through the
/// unwound argument of x.
inline cplx oracle_wavefunction(int n, double alpha, QuasiParity q, const SheetPoint& p) {
  if (!(p.modulus > 0.0)) throw SingularityError("oracle wavefunction at the branch point");
  const double sa = q == QuasiParity::Plus ? alpha : -alpha;
  const cplx x = p.value();
  return p.pow(0.5 + sa) * std::exp(-0.5 * x * x) * laguerre(n, sa, x * x);
}

/// psi'/psi of the oracle wavefunction.
inline cplx oracle_log_derivative(int n, double alpha, QuasiParity q, const SheetPoint& p) {
  const double sa = q == QuasiParity::Plus ? alpha : -alpha;
  const cplx x = p.value();
  cplx lag_ratio = 0.0;
  if (n > 0) {
    // d/dz L_n^{(a)}(z) = -L_{n-1}^{(a+1)}(z)
    lag_ratio = -2.0 * x * laguerre(n - 1, sa + 1.0, x * x) / laguerre(n, sa, x * x);
  }
  return (0.5 + sa) / x - x + lag_ratio;
}

// --- root search -----------------------------------------------------------

namespace detail {

struct RootOutcome {
  cplx z;
  double residual;
  bool converged;
};

/// Complex secant iteration on f from two starting points.
inline RootOutcome secant_polish(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, double tol,
                                 int max_iter = 60) {
  cplx f0 = f(z0);
  cplx f1 = f(z1);
  if (std::abs(f0) < std::abs(f1)) {
    std::swap(z0, z1);
    std::swap(f0, f1);
  }
  double best = std::abs(f1);
  cplx best_z = z1;
  int settled = 0;
  for (int it = 0; it < max_iter; ++it) {
    const cplx den = f1 - f0;
    if (den == cplx{}) break;
    cplx step = f1 * (z1 - z0) / den;
    const double cap = 0.5 + 0.5 * std::abs(z1);
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    const cplx z2 = z1 - step;
    const cplx f2 = f(z2);
    z0 = z1;
    f0 = f1;
    z1 = z2;
    f1 = f2;
    if (std::abs(f2) < best) {
      best = std::abs(f2);
      best_z = z2;
    }
    if (best <= tol && std::abs(step) <= 1e-13 * (1.0 + std::abs(z1))) break;
    if (best <= tol && ++settled >= 3) break;
  }
  return {best_z, best, best <= tol};
}

/// Illinois (modified regula falsi) on Re f over a real bracket.
inline double illinois(const std::function<cplx(cplx)>& f, double a, double b, double fa, double fb,
                       double xtol = 1e-13, int max_iter = 100) {
  int side = 0;
  double c = a;
  for (int it = 0; it < max_iter; ++it) {
    c = (a * fb - b * fa) / (fb - fa);
    const double fc = f(c).real();
    if (fc == 0.0) return c;
    if ((fc > 0.0) == (fb > 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
    if (std::abs(b - a) <= xtol * (1.0 + std::abs(c))) break;
  }
  return c;
}

}  // namespace detail

struct ScanOptions {
  double lo = 0.0;
  double hi = 12.0;
  int grid_points = 200;
  double tolerance = 1e-9;
};

/// Grid scan of f over real [lo, hi], then refinement of every sign change of
/// Re f (bracketed, then complex secant) and every interior local minimum of
/// |f| (complex secant). Results are sorted by Re z and deduplicated.
inline std::vector<EigenResult> scan_and_refine(const std::function<cplx(cplx)>& f, const ScanOptions& opt) {
  if (opt.grid_points < 8) throw InvalidArgument("grid_points must be at least 8");
  if (!(opt.hi > opt.lo)) {
    if (opt.hi == opt.lo) return {};
    throw InvalidArgument("search window must have positive width");
  }
  const int m = opt.grid_points;
  std::vector<double> grid(m);
  for (int i = 0; i < m; ++i) grid[i] = opt.lo + (opt.hi - opt.lo) * i / (m - 1);
  const std::vector<cplx> vals = parallel_map(grid, [&](double e) { return f(e); });
  const double h = grid[1] - grid[0];

  struct Candidate {
    int i;
    bool bracket;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i + 1 < m; ++i) {
    if ((vals[i].real() > 0.0) != (vals[i + 1].real() > 0.0)) cands.push_back({i, true});
  }
  for (int i = 1; i + 1 < m; ++i) {
    const double a = std::abs(vals[i]);
    if (a < std::abs(vals[i - 1]) && a <= std::abs(vals[i + 1])) {
      const bool near_bracket = std::any_of(cands.begin(), cands.end(), [&](const Candidate& c) {
        return c.bracket && (c.i == i || c.i + 1 == i || c.i == i - 1);
      });
      if (!near_bracket) cands.push_back({i, false});
    }
  }

  auto refine = [&](const Candidate& c) -> std::optional<EigenResult> {
    detail::RootOutcome out;
    double grid_residual;
    if (c.bracket) {
      const double r = detail::illinois(f, grid[c.i], grid[c.i + 1], vals[c.i].real(), vals[c.i + 1].real());
      out = detail::secant_polish(f, r, r + 1e-7 * (1.0 + std::abs(r)), opt.tolerance);
      grid_residual = std::min(std::abs(vals[c.i]), std::abs(vals[c.i + 1]));
    } else {
      out = detail::secant_polish(f, grid[c.i], cplx(grid[c.i] + 0.25 * h, 0.05 * h), opt.tolerance);
      grid_residual = std::abs(vals[c.i]);
      // a minimum that does not refine to a root is not reported
      if (!out.converged && out.residual > 1e3 * opt.tolerance) return std::nullopt;
    }
    EigenResult res;
    res.energy = out.z;
    res.residual = out.residual;
    res.converged = out.converged && out.residual <= std::max(grid_residual, opt.tolerance);
    return res;
  };
  std::vector<std::optional<EigenResult>> refined = parallel_map(cands, refine);

  std::vector<EigenResult> results;
  for (auto& r : refined)
    if (r) results.push_back(*r);
  std::sort(results.begin(), results.end(), [](const EigenResult& a, const EigenResult& b) {
    return a.energy.real() < b.energy.real() ||
           (a.energy.real() == b.energy.real() && a.energy.imag() < b.energy.imag());
  });
  std::vector<EigenResult> unique;
  for (auto& r : results) {
    const double lo_edge = opt.lo - 0.5 * h;
    const double hi_edge = opt.hi + 0.5 * h;
    if (r.energy.real() < lo_edge || r.energy.real() > hi_edge) continue;
    if (!unique.empty() && std::abs(unique.back().energy - r.energy) <= 1e-7 * std::max(1.0, std::abs(r.energy))) {
      if (r.residual < unique.back().residual) unique.back() = r;
      continue;
    }
    unique.push_back(r);
  }
  for (std::size_t i = 0; i < unique.size(); ++i) unique[i].index_hint = static_cast<int>(i);
  return unique;
}

namespace detail {

inline bool is_pure_oscillator(const PowerLawPotential& v) {
  if (v.harmonic != 1.0 || !v.poles.empty()) return false;
  return std::all_of(v.terms.begin(), v.terms.end(), [](const PowerTerm& t) { return t.g == cplx{}; });
}

inline void attach_labels(const EigenProblem& prob, std::vector<EigenResult>& rs) {
  if (!is_pure_oscillator(prob.potential)) return;
  const double alpha = prob.potential.alpha();
  for (auto& r : rs) {
    if (prob.contour.kind == ContourKind::HalfLine) continue;
    for (int n = 0; n < 10000; ++n) {
      bool done = false;
      for (QuasiParity q : {QuasiParity::Minus, QuasiParity::Plus}) {
        const double e = oracle_ptsqm(n, alpha, q);
        if (std::abs(r.energy - e) < 1e-4) {
          r.labels = EigenLabels{n, q};
          done = true;
          break;
        }
      }
      if (done || 4.0 * n + 2.0 - 2.0 * std::abs(alpha) > r.energy.real() + 1.0) break;
    }
  }
}

/// For a potential even in x the two end wedges sit on z = x^2 sheets 2N + 1
/// apart, and the local monodromy at z = 0 raised to that power is a multiple
/// of the identity when (2N + 1) alpha is an integer. The recessive solutions
/// of both ends then coincide and every energy matches.
inline void check_toboggan_monodromy(const EigenProblem& prob) {
  const PowerLawPotential& v = prob.potential;
  if (v.centrifugal() == 0.0 || !v.poles.empty() || prob.contour.kind == ContourKind::HalfLine) return;
  for (const auto& t : v.terms)
    if (t.g != cplx{} && !t.beta.is_even_integer()) return;
  const int k = 2 * prob.contour.winding + 1;
  const double ka = k * v.alpha();
  if (std::abs(ka - std::round(ka)) < 1e-8) {
    std::ostringstream os;
    os << "degenerate toboggan: (2N + 1) alpha = " << ka << " is an integer for N = " << prob.contour.winding
       << ", so every energy satisfies the matching condition";
    throw InvalidArgument(os.str());
  }
}

}  // namespace detail

/// Two-sided shooting over the contour of `prob`.
inline std::vector<EigenResult> find_eigenvalues(const EigenProblem& prob) {
  const double alpha = prob.potential.alpha();
  if (prob.potential.centrifugal() != 0.0 && std::abs(alpha - std::round(alpha)) < 1e-8)
    throw InvalidArgument("integer alpha = ell + 1/2 is a degenerate (logarithmic) case");
  if (prob.window_hi < prob.window_lo) throw InvalidArgument("search window must have positive width");
  detail::check_toboggan_monodromy(prob);
  const auto f =[&](cplx E) { return shooting_mismatch(prob.potential, E, prob.contour, prob.step); };
  auto rs = scan_and_refine(f, {prob.window_lo, prob.window_hi, prob.grid_points, prob.refine_tolerance});
  detail::attach_labels(prob, rs);
  return rs;
}

/// Energy map E -> scale * E + shift.
struct EnergyMap {
  cplx scale = 1.0;
  cplx shift = 0.0;
  cplx operator()(cplx e) const { return scale * e + shift; }
};

struct ComparePair {
  std::size_t a;
  std::size_t b;
  double distance;
};

struct CompareReport {
  std::vector<ComparePair> matched;
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;
  double max_distance = 0.0;
  bool all_matched() const { return unmatched_a.empty() && unmatched_b.empty(); }
};

/// Greedy nearest pairing of map(a_i) with b_j within tol.
inline CompareReport spectrum_compare(const std::vector<EigenResult>& a, const std::vector<EigenResult>& b,
                                      const EnergyMap& map = {}, double tol = 1e-5) {
  CompareReport rep;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx e = map(a[i].energy);
    std::size_t best = b.size();
    double bd = tol;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(b[j].energy - e);
      if (!used[j] && d <= bd) {
        bd = d;
        best = j;
      }
    }
    if (best == b.size()) {
      rep.unmatched_a.push_back(i);
    } else {
      used[best] = true;
      rep.matched.push_back({i, best, bd});
      rep.max_distance = std::max(rep.max_distance, bd);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!used[j]) rep.unmatched_b.push_back(j);
  return rep;
}

}  // namespace toboggan
