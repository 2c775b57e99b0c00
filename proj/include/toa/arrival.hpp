#pragma once

#include <vector>

#include "toa/propagator.hpp"
#include "toa/types.hpp"

namespace toa {

/// Arrival-time density sampled on a time grid.  total_mass is the trapezoid
/// integral at construction; normalized marks a density rescaled to unit mass.
struct ArrivalDistribution {
  RealArray times;
  RealArray density;  // 1/us
  double total_mass = 0.0;
  bool normalized = false;
};

double trapezoid(const RealArray& x, const RealArray& y);

/// Primary estimator: density(t) = gamma * P2(t), smooth by construction.
ArrivalDistribution pi_from_p2(const PropagationRecord& rec, double gamma);
ArrivalDistribution pi_from_p2(const RealArray& times, const RealArray& p2, double gamma);

/// -dN/dt by finite differences (central inside, second-order one-sided at
/// the ends).  Cross-checks pi_from_p2; requires >= 3 uniform samples.
ArrivalDistribution pi_from_norm_fd(const PropagationRecord& rec);
ArrivalDistribution pi_from_norm_fd(const RealArray& times, const RealArray& norm);

/// Convergence evidence behind detected/rejected fractions: the run must
/// have flatlined and the surviving packet must have left the laser edge.
struct FractionDiagnostics {
  double dn_dt_end = 0.0;            // gamma * P2(t_end)
  double edge_ground_density = 0.0;  // max |psi_1|^2 within 1 um of the edge
  double ground_fraction = 1.0;      // share of surviving norm in the ground level
  double mean_k_ground = 0.0;        // momentum expectation of the survivor
  bool converged = false;
};

FractionDiagnostics fraction_diagnostics(const PropagationRecord& rec, double gamma,
                                         double laser_edge);

/// detected = 1 - N(t_end), rejected = N(t_end).  Throw numeric_error unless
/// the diagnostics above pass (|dN/dt| < 1e-6, edge density < 1e-6, and for a
/// non-negligible survivor: >= 99% ground with negative mean momentum).
double detected_fraction(const PropagationRecord& rec, double gamma, double laser_edge);
double rejected_fraction(const PropagationRecord& rec, double gamma, double laser_edge);

ArrivalDistribution normalized(const ArrivalDistribution& d);
ArrivalDistribution resample_linear(const ArrivalDistribution& d, const RealArray& times);

double mean_time(const ArrivalDistribution& d);
double l1_distance(const ArrivalDistribution& a, const ArrivalDistribution& b);
double ks_distance(const ArrivalDistribution& a, const ArrivalDistribution& b);

/// Exact empirical-vs-reference Kolmogorov statistic; the reference CDF is
/// the trapezoid cumulative of a normalized density, linearly interpolated.
double ks_distance_samples(std::vector<double> samples, const ArrivalDistribution& ref);

}  // namespace toa
