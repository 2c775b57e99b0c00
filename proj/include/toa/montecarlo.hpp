#pragma once

#include <cstdint>
#include <vector>

#include "toa/propagator.hpp"
#include "toa/types.hpp"

namespace toa {

/// Counter-based uniform generator (splitmix64 finalizer on seed + counter
/// stride).  Stateless draws keyed by (seed, counter) make trajectories
/// reproducible under any thread schedule.
struct CounterRng {
  std::uint64_t seed = 0;

  double uniform(std::uint64_t counter) const {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

/// Jump draw threshold for the (unnormalized) conditional state: the
/// detection probability of the step is gamma*dt*P2 of the normalized
/// state, i.e. gamma*dt*p2/n here.  One definition shared by every path
/// so histograms and single trajectories agree bit for bit.
inline double jump_probability(double gamma, double dt, double p2, double n) {
  return gamma * dt * p2 / n;
}

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<double> photon_times;  // strictly increasing; empty iff survived
  bool survived = true;
};

/// Quantum-jump unraveling: evolve by strang_step, after step s draw
/// u = rng(seed, s); u below the jump threshold records a photon at the
/// step-end time and collapses ground <- excited / sqrt(P2), excited <- 0
/// (internal-level jump only, no recoil).  Runs through t_max even after
/// detections.  rho22_trace, if given, receives P2/N after every step
/// (steps + 1 values including t = 0).
TrajectoryRecord run_trajectory(Propagator& prop, const SpinorField& initial, double t_max,
                                std::uint64_t seed, RealArray* rho22_trace = nullptr);

struct HistogramResult {
  RealArray bin_centers;  // us
  RealArray counts;
  RealArray density;     // counts / (n_traj * bin_width); integrates to detected share
  RealArray se_density;  // per-bin binomial standard error of density
  std::vector<double> first_times;  // ascending trajectory order
  Index survived = 0;
  Index n_traj = 0;
  double bin_width = 0.0;
};

/// First-photon histogram over n_traj trajectories seeded base_seed + index.
/// Until its first jump every trajectory coincides with the deterministic
/// no-jump evolution, so one propagation supplies the per-step thresholds
/// and each trajectory reduces to a scan of its random stream; this is
/// bitwise identical to running run_trajectory per seed.  Bins are uniform
/// on [0, t_max].  threads > 1 splits the scan; merged counts do not depend
/// on the split.
HistogramResult first_photon_histogram(Propagator& prop, const SpinorField& initial,
                                       double t_max, Index n_traj, std::uint64_t base_seed,
                                       Index bins, int threads = 1);

struct TwoLevelDensity {
  double rho11 = 1.0;
  double rho22 = 0.0;
  Complex rho12 = 0.0;
};

/// Resonant optical Bloch equations by fixed-step RK4 (step <= 1e-3 / max(omega,
/// gamma)), sampled on t_grid (t_grid[0] is the initial time).
std::vector<TwoLevelDensity> lindblad_0d(double omega, double gamma, const RealArray& t_grid,
                                         TwoLevelDensity initial = {});

/// No-detection branch of the 0D problem from the ground state: N(t) and
/// P2(t) of the unnormalized conditional pair under the 2x2 effective
/// Hamiltonian, via its closed-form exponential.
void lindblad_0d_conditional(double omega, double gamma, const RealArray& t_grid,
                             RealArray& n_out, RealArray& p2_out);

}  // namespace toa
