// Spectrum of the spiked oscillator on straight and tobogganic contours,
// then of a perturbed toboggan whose levels depend on the winding number.

#include <cstdio>

#include "toboggan/toboggan.hpp"

using namespace toboggan;

namespace {

void print_levels(const char* title, const EigenProblem& p) {
  std::printf("%s\n", title);
  for (const auto& r : find_eigenvalues(p)) {
    std::printf("  E = %14.10f %+.2e i", r.energy.real(), r.energy.imag());
    if (r.labels) std::printf("   n = %d, q = %s", r.labels->n, to_string(r.labels->q).c_str());
    std::printf("\n");
  }
}

}  // namespace

int main() {
  EigenProblem p;
  p.potential.ell = -0.2;  // alpha = 0.3
  p.window_lo = 0.0;
  p.window_hi = 10.0;

  p.contour = make_straight(0.5);
  print_levels("spiked oscillator, alpha = 0.3, straight contour", p);
  p.contour = make_toboggan(1, 0.5);
  print_levels("same potential, N = 1 toboggan", p);

  p.potential.ell = 0.3;
  p.potential.add_term(RationalExponent(1), 0.1);
  p.window_lo = -1.0;
  for (int N : {0, 1}) {
    p.contour = N == 0 ? make_straight(0.5) : make_toboggan(N, 0.5);
    print_levels(N == 0 ? "perturbed by 0.1 (ix), N = 0" : "perturbed by 0.1 (ix), N = 1", p);
  }
}
