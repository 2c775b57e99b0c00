#pragma once

#include "toa/grid.hpp"
#include "toa/types.hpp"

namespace toa {

/// Analytic description of a minimum-uncertainty Gaussian packet in the
/// ground internal level.  All quantities in internal units (um, us).
/// At t_offset = 0 the position spread is sigma_x = 1/(2*m*dv), i.e.
/// sigma_x * sigma_p = 1/2 with hbar = 1.  t_offset carries elapsed
/// analytic free flight; x0 is the center at that offset.
struct GaussianPacketSpec {
  double x0 = 0.0;       // um, current center
  double v_mean = 0.0;   // um/us
  double dv = 0.0;       // um/us, velocity standard deviation (> 0)
  double weight = 1.0;   // mixture weight in [0, 1]
  double t_offset = 0.0; // us of analytic free flight already applied

  double sigma_x0(double mass) const { return 1.0 / (2.0 * mass * dv); }
  /// Spread after t_offset of free flight: sigma0 * sqrt(1 + (t/(2 m sigma0^2))^2).
  double sigma_x(double mass) const;
};

/// Two-component conditional wavefunction on a grid.  ground/excited hold
/// <x|psi_c,1> and <x|psi_c,2>; the squared norm sums both components.
struct SpinorField {
  ComplexArray ground;
  ComplexArray excited;
  Grid grid;

  explicit SpinorField(const Grid& g)
      : ground(ComplexArray::Zero(g.size())),
        excited(ComplexArray::Zero(g.size())),
        grid(g) {}

  double norm() const { return grid.dx() * (ground.abs2().sum() + excited.abs2().sum()); }
  double excited_norm() const { return grid.dx() * excited.abs2().sum(); }
  double ground_norm() const { return grid.dx() * ground.abs2().sum(); }
};

/// Momentum amplitudes of both components, DFT-ordered on grid.k(j), with
/// the convention phi(k_j) = dx/sqrt(2 pi) * sum_l psi(x_l) exp(-i k_j x_l).
/// Parseval: sum |phi_j|^2 dk = sum |psi_l|^2 dx.
struct MomentumAmplitudes {
  ComplexArray ground;
  ComplexArray excited;
  Grid grid;
};

/// Discretizes a packet onto the grid: ground component is the (possibly
/// spread) Gaussian with total norm = spec.weight, excited is zero.
/// Requires grid.require_resolves(spec, mass).
SpinorField sample_gaussian(const GaussianPacketSpec& spec, const Grid& grid, double mass);

/// Advances the analytic parameters by free flight: x0 += v*t,
/// t_offset += t.  Sampling the result equals free Schroedinger evolution
/// of the original sample.
GaussianPacketSpec free_evolve_spec(GaussianPacketSpec spec, double t);

MomentumAmplitudes momentum_amplitudes(const SpinorField& field);

}  // namespace toa
