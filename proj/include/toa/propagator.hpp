#pragma once

#include "toa/fft.hpp"
#include "toa/grid.hpp"
#include "toa/laser.hpp"
#include "toa/types.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

struct PropagateOptions {
  double t_max = 0.0;
  Index sample_stride = 10;
  double edge_leak_threshold = 1e-6;
};

/// Time series sampled every sample_stride steps, t = 0 included.
struct PropagationRecord {
  RealArray times;
  RealArray norm;   // N(t), no-detection probability
  RealArray p2;     // excited-component norm
  double edge_leak = 0.0;
  SpinorField final_field;
};

/// Strang-split spectral propagator for the non-Hermitian two-level
/// Hamiltonian with spatial laser profile: per step V(dt/2) K(dt) V(dt/2),
/// V the pointwise 2x2 exponential, K the Fourier kinetic phase.
/// dt is fixed at construction so both factor tables are precomputed.
class Propagator {
 public:
  /// frozen_atom disables the kinetic factor, leaving independent 0D
  /// two-level evolution at every grid point.
  Propagator(const Grid& grid, const LaserProfile& laser, const InternalAtom& atom,
             double dt, bool frozen_atom = false);

  const Grid& grid() const { return grid_; }
  const LaserProfile& laser() const { return laser_; }
  double dt() const { return dt_; }
  double gamma() const { return atom_.gamma; }
  bool frozen_atom() const { return frozen_; }

  void half_potential_step(SpinorField& f);
  void kinetic_full_step(SpinorField& f);
  void strang_step(SpinorField& f);

  /// Iterates strang_step over t_max / dt steps (t_max must be an integer
  /// multiple of dt, and the step count a multiple of sample_stride).
  /// Boundary density above opt.edge_leak_threshold at any sample aborts
  /// with numeric_error: periodic wrap-around would corrupt the norm.
  PropagationRecord propagate(const SpinorField& initial, const PropagateOptions& opt);

 private:
  Grid grid_;
  LaserProfile laser_;
  InternalAtom atom_;
  double dt_;
  bool frozen_;
  ComplexArray v11_, v12_, v22_;
  ComplexArray kphase_;  // exp(-i k^2 dt / (2 m)) / n, inverse-FFT scale folded in
  ComplexArray scratch_;
  Fft fft_;

  double edge_density(const SpinorField& f) const;
};

}  // namespace toa
