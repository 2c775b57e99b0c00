#pragma once

#include <cmath>
#include <complex>

#include "toa/types.hpp"

namespace toa {

/// exp(-i tau M) for the local two-level block of the effective Hamiltonian,
///   M = [[0, Omega/2], [Omega/2, -i gamma/2]]   (laser on resonance).
/// M is symmetric, so the exponential is too; e12 serves both off-diagonals.
struct TwoLevelHalfStep {
  Complex e11;
  Complex e12;
  Complex e22;
};

/// Closed form via M = mu*I + (M - mu*I) with mu = -i gamma/4:
///   exp(-i tau M) = e^{-gamma tau/4} [cos(D tau) I - i S (M - mu I)],
///   D = sqrt(Omega^2/4 - gamma^2/16),  S = sin(D tau)/D.
/// D may be real, imaginary, or zero; S is even in D, so the principal
/// branch of the complex sqrt is safe.  Near D = 0, S uses its Taylor
/// series to avoid 0/0.
inline TwoLevelHalfStep two_level_exponential(double omega, double gamma, double tau) {
  const Complex disc(0.25 * omega * omega - gamma * gamma / 16.0, 0.0);
  const Complex d = std::sqrt(disc);
  const Complex dt = d * tau;
  Complex s;
  if (std::abs(dt) < 1e-4) {
    const Complex dt2 = dt * dt;
    s = tau * (1.0 - dt2 / 6.0 + dt2 * dt2 / 120.0);
  } else {
    s = std::sin(dt) / d;
  }
  const Complex damp = std::exp(Complex(-gamma * tau / 4.0, 0.0));
  const Complex c = std::cos(dt);
  return {
      damp * (c + s * (gamma / 4.0)),
      damp * (-I * s * (0.5 * omega)),
      damp * (c - s * (gamma / 4.0)),
  };
}

}  // namespace toa
