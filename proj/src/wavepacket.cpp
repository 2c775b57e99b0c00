#include "toa/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "toa/errors.hpp"
#include "toa/fft.hpp"

namespace toa {

Real GaussianPacketSpec::sigma_x(Real mass) const {
  const Real s0 = sigma_x0(mass);
  const Real r = t_offset / (2.0 * mass * s0 * s0);
  return s0 * std::sqrt(1.0 + r * r);
}

GaussianPacketSpec free_evolve_spec(GaussianPacketSpec spec, Real t) {
  if (t < 0.0) throw std::invalid_argument("free_evolve_spec: t must be non-negative");
  spec.x0 += spec.v_mean * t;
  spec.t_offset += t;
  return spec;
}

// Free Gaussian with the phase-space widths fixed at t_offset = 0:
//   psi(x, t) = (2 pi sigma_k^2)^{-1/4} (2 a)^{-1/2}
//               exp(-(x - xc)^2 / (4 a)) exp(i k0 (x - x_orig) - i k0^2 t / (2 m))
// with a = sigma_x0^2 + i t / (2 m), xc the current center and x_orig the
// center at t = 0.  This is the exact free evolution of the minimum-uncertainty
// packet, so sampling at a later t_offset equals propagating the t = 0 sample.
SpinorField sample_gaussian(const GaussianPacketSpec& spec, const Grid& grid, Real mass) {
  if (!(mass > 0.0)) throw config_error("sample_gaussian: mass must be positive");
  if (!(spec.dv > 0.0)) throw config_error("packet: dv must be positive");
  if (!(spec.weight > 0.0)) throw config_error("packet: weight must be positive");
  grid.require_resolves(spec, mass);
  const Real sigma0 = spec.sigma_x0(mass);
  const Real sigma_k = mass * spec.dv;
  const Real k0 = mass * spec.v_mean;
  const Real x_orig = spec.x0 - spec.v_mean * spec.t_offset;
  const Complex a(sigma0 * sigma0, spec.t_offset / (2.0 * mass));
  const Complex pref = std::pow(2.0 * std::numbers::pi * sigma_k * sigma_k, -0.25) /
                       std::sqrt(2.0 * a) * std::sqrt(spec.weight);
  const Real global_phase = -k0 * k0 * spec.t_offset / (2.0 * mass);

  SpinorField field(grid);
  const Index n = grid.size();
  for (Index j = 0; j < n; ++j) {
    const Real x = grid.x(j);
    const Real d = x - spec.x0;
    const Complex arg = -d * d / (4.0 * a) + I * (k0 * (x - x_orig) + global_phase);
    field.ground[j] = pref * std::exp(arg);
  }
  return field;
}

MomentumAmplitudes momentum_amplitudes(const SpinorField& field) {
  const Grid& grid = field.grid;
  const Index n = grid.size();
  Fft fft(n);
  MomentumAmplitudes out{ComplexArray(n), ComplexArray(n), grid};

  // Continuum convention: phi(k) = (2 pi)^{-1/2} int dx e^{-i k x} psi(x).
  // On the grid this is the DFT times dx / sqrt(2 pi) and a phase anchoring
  // x = 0 (the DFT sums from the first grid point, not the origin).
  const Real scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi);
  ComplexArray phase(n);
  for (Index j = 0; j < n; ++j)
    phase[j] = scale * std::exp(-I * grid.k(j) * grid.x_min());

  out.ground = fft.forward(field.ground) * phase;
  out.excited = fft.forward(field.excited) * phase;
  return out;
}

}  // namespace toa
