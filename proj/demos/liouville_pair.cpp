// A perturbed N = 1 toboggan and its tau = 2 image: the image lives on a
// single sheet and its coupling eigenvalues map back onto the source energies.

#include <cstdio>

#include "toboggan/toboggan.hpp"

using namespace toboggan;

int main() {
  EigenProblem p;
  p.potential.ell = 0.3;
  p.potential.add_term(RationalExponent(1), 0.1);
  p.contour = make_toboggan(1, 0.5);
  p.window_lo = -1.0;
  p.window_hi = 10.0;

  const RationalExponent tau = minimal_tau(p.potential).tau;
  const auto lt = transform(p, tau, true);
  std::printf("tau = %s, target winding %d\n", tau.str().c_str(), lt.map.target_winding);
  std::printf("target potential:\n%s", format_potential(lt.target.potential).c_str());

  const auto direct = find_eigenvalues(p);
  const auto pulled = pull_back_energy(lt.map, find_target_couplings(lt));
  const auto rep = spectrum_compare(direct, pulled, {}, 1e-5);
  std::printf("%-18s %-18s %s\n", "direct", "pulled back", "distance");
  for (const auto& m : rep.matched)
    std::printf("%-18.12f %-18.12f %.1e\n", direct[m.a].energy.real(), pulled[m.b].energy.real(), m.distance);
  std::printf("unmatched: %zu direct, %zu pulled back\n", rep.unmatched_a.size(), rep.unmatched_b.size());
}
