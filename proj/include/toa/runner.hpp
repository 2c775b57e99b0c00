#pragma once

#include "toa/arrival.hpp"
#include "toa/config.hpp"
#include "toa/kijowski.hpp"
#include "toa/montecarlo.hpp"

namespace toa {

/// Mixture-merged propagation summary.  Series are sums over packet members
/// (incoherent mixture: norms and densities add), so pi inherits mixture
/// linearity exactly.  detected/rejected are plain bookkeeping here; the
/// strict precondition-checked variants live in arrival.
struct SimulationOutcome {
  RealArray times;
  RealArray norm;
  RealArray p2;
  double edge_leak = 0.0;
  ArrivalDistribution pi;     // gamma * p2
  ArrivalDistribution pi_fd;  // -dN/dt cross-check
  FractionDiagnostics diag;
  double detected = 0.0;
  double rejected = 0.0;
};

SimulationOutcome run_simulation(const SimulationConfig& cfg, bool frozen_atom = false);

/// Weighted mixture of per-packet reference curves on the config's sample
/// time grid.
ArrivalDistribution run_kijowski(const SimulationConfig& cfg);

struct CompareOutcome {
  SimulationOutcome op;
  ArrivalDistribution kij;
  double l1 = 0.0;
  double ks = 0.0;
  double mean_op = 0.0;   // us, of the normalized operational curve
  double mean_kij = 0.0;  // us, of the normalized reference
};

CompareOutcome run_compare(const SimulationConfig& cfg, bool frozen_atom = false);

}  // namespace toa
