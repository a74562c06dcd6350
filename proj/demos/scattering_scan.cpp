// Backward and forward amplitudes of the spiked oscillator along the lower
// anti-Stokes contour, closed form against numerical extraction.

#include <cstdio>

#include "toboggan/toboggan.hpp"

using namespace toboggan;

int main() {
  const double alpha = 0.35;
  PowerLawPotential v;
  v.ell = alpha - 0.5;
  std::printf("%6s %24s %24s %10s %8s\n", "E", "B (closed form)", "F (closed form)", "|dB|+|dF|", "slope");
  for (double E = 0.5; E <= 6.01; E += 0.5) {
    ScatterProblem p;
    p.alpha = alpha;
    p.energy = E;
    const auto a = analytic_amplitudes(p);
    const auto n = numerical_amplitudes(v, p);
    std::printf("%6.2f %11.6f%+11.6fi %11.6f%+11.6fi %10.1e %8.4f\n", E, a.backward.real(), a.backward.imag(),
                a.forward.real(), a.forward.imag(), std::abs(a.backward - n.backward) + std::abs(a.forward - n.forward),
                n.distortion_exponent / p.mu());
  }
  std::printf("resonances of alpha = 3.5:");
  for (double e : resonance_energies(3.5, 10)) std::printf(" %g", e);
  std::printf("\n");
}
