#include "toa/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "toa/errors.hpp"

namespace toa {

namespace {

void require_uniform(const RealArray& t) {
  if (t.size() < 3) throw std::invalid_argument("time series needs at least 3 samples");
  const double step = t[1] - t[0];
  if (!(step > 0.0)) throw std::invalid_argument("time samples must increase");
  for (Index i = 2; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * step)
      throw std::invalid_argument("time samples must be uniform");
}

RealArray cumulative_trapezoid(const RealArray& t, const RealArray& y) {
  RealArray c(t.size());
  c[0] = 0.0;
  for (Index i = 1; i < t.size(); ++i)
    c[i] = c[i - 1] + 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return c;
}

double interp_at(const RealArray& x, const RealArray& y, double xi) {
  if (xi <= x[0]) return y[0];
  const Index n = x.size();
  if (xi >= x[n - 1]) return y[n - 1];
  const double* begin = x.data();
  const auto hi = static_cast<Index>(std::upper_bound(begin, begin + n, xi) - begin);
  const double w = (xi - x[hi - 1]) / (x[hi] - x[hi - 1]);
  return y[hi - 1] + w * (y[hi] - y[hi - 1]);
}

void require_normalized(const ArrivalDistribution& d, const char* who) {
  if (!d.normalized)
    throw std::invalid_argument(std::string(who) + ": distribution must be normalized");
}

}  // namespace

double trapezoid(const RealArray& x, const RealArray& y) {
  double acc = 0.0;
  for (Index i = 1; i < x.size(); ++i) acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return acc;
}

ArrivalDistribution pi_from_p2(const RealArray& times, const RealArray& p2, double gamma) {
  ArrivalDistribution d{times, gamma * p2, 0.0, false};
  d.total_mass = trapezoid(d.times, d.density);
  return d;
}

ArrivalDistribution pi_from_p2(const PropagationRecord& rec, double gamma) {
  return pi_from_p2(rec.times, rec.p2, gamma);
}

ArrivalDistribution pi_from_norm_fd(const RealArray& times, const RealArray& nn) {
  require_uniform(times);
  const Index m = nn.size();
  const double h = times[1] - times[0];
  RealArray density(m);
  density[0] = -(-3.0 * nn[0] + 4.0 * nn[1] - nn[2]) / (2.0 * h);
  for (Index i = 1; i + 1 < m; ++i) density[i] = -(nn[i + 1] - nn[i - 1]) / (2.0 * h);
  density[m - 1] = -(3.0 * nn[m - 1] - 4.0 * nn[m - 2] + nn[m - 3]) / (2.0 * h);
  ArrivalDistribution d{times, std::move(density), 0.0, false};
  d.total_mass = trapezoid(d.times, d.density);
  return d;
}

ArrivalDistribution pi_from_norm_fd(const PropagationRecord& rec) {
  return pi_from_norm_fd(rec.times, rec.norm);
}

FractionDiagnostics fraction_diagnostics(const PropagationRecord& rec, double gamma,
                                         double laser_edge) {
  FractionDiagnostics diag;
  if (gamma == 0.0) {
    diag.converged = true;
    return diag;
  }
  const Index last = rec.p2.size() - 1;
  diag.dn_dt_end = gamma * rec.p2[last];

  const SpinorField& f = rec.final_field;
  const Grid& g = f.grid;
  for (Index j = 0; j < g.size(); ++j)
    if (std::abs(g.x(j) - laser_edge) <= 1.0)
      diag.edge_ground_density = std::max(diag.edge_ground_density, std::norm(f.ground[j]));

  const double survived = f.norm();
  if (survived > 1e-9) {
    diag.ground_fraction = f.ground_norm() / survived;
    const MomentumAmplitudes mom = momentum_amplitudes(f);
    double mass = 0.0, first = 0.0;
    for (Index j = 0; j < g.size(); ++j) {
      const double w = std::norm(mom.ground[j]);
      mass += w;
      first += w * g.k(j);
    }
    diag.mean_k_ground = mass > 0.0 ? first / mass : 0.0;
    diag.converged = diag.dn_dt_end < 1e-6 && diag.edge_ground_density < 1e-6 &&
                     diag.ground_fraction >= 0.99 && diag.mean_k_ground < 0.0;
  } else {
    diag.converged = diag.dn_dt_end < 1e-6 && diag.edge_ground_density < 1e-6;
  }
  return diag;
}

namespace {

double surviving_norm_checked(const PropagationRecord& rec, double gamma, double laser_edge) {
  const FractionDiagnostics diag = fraction_diagnostics(rec, gamma, laser_edge);
  if (!diag.converged) {
    std::ostringstream msg;
    msg << "fractions not converged: |dN/dt| = " << diag.dn_dt_end
        << " (need < 1e-6), ground density near edge = " << diag.edge_ground_density
        << " (need < 1e-6), surviving ground fraction = " << diag.ground_fraction
        << " (need >= 0.99 with <k> = " << diag.mean_k_ground
        << " < 0); run longer or enlarge the grid";
    throw numeric_error(msg.str());
  }
  return rec.norm[rec.norm.size() - 1];
}

}  // namespace

double detected_fraction(const PropagationRecord& rec, double gamma, double laser_edge) {
  if (gamma == 0.0) return 0.0;
  return rec.norm[0] - surviving_norm_checked(rec, gamma, laser_edge);
}

double rejected_fraction(const PropagationRecord& rec, double gamma, double laser_edge) {
  if (gamma == 0.0) return rec.norm[rec.norm.size() - 1];
  return surviving_norm_checked(rec, gamma, laser_edge);
}

ArrivalDistribution normalized(const ArrivalDistribution& d) {
  if (!(d.total_mass > 0.0))
    throw std::invalid_argument("normalized: distribution has no mass");
  return {d.times, d.density / d.total_mass, 1.0, true};
}

ArrivalDistribution resample_linear(const ArrivalDistribution& d, const RealArray& times) {
  RealArray density(times.size());
  for (Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    density[i] = (t < d.times[0] || t > d.times[d.times.size() - 1])
                     ? 0.0
                     : interp_at(d.times, d.density, t);
  }
  ArrivalDistribution out{times, std::move(density), 0.0, d.normalized};
  out.total_mass = trapezoid(out.times, out.density);
  return out;
}

double mean_time(const ArrivalDistribution& d) {
  require_normalized(d, "mean_time");
  return trapezoid(d.times, RealArray(d.times * d.density));
}

namespace {

// Resamples both onto the union of the two sample sets so that mass outside
// either range still counts (disjoint supports must yield L1 = 2, KS = 1).
std::pair<ArrivalDistribution, ArrivalDistribution> on_common_grid(
    const ArrivalDistribution& a, const ArrivalDistribution& b) {
  const bool same = a.times.size() == b.times.size() &&
                    (a.times.size() == 0 || (a.times == b.times).all());
  if (same) return {a, b};
  std::vector<double> merged(a.times.data(), a.times.data() + a.times.size());
  merged.insert(merged.end(), b.times.data(), b.times.data() + b.times.size());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  const RealArray grid = Eigen::Map<const RealArray>(merged.data(), merged.size());
  ArrivalDistribution ra = resample_linear(a, grid);
  ArrivalDistribution rb = resample_linear(b, grid);
  ra.normalized = a.normalized;
  rb.normalized = b.normalized;
  return {ra, rb};
}

}  // namespace

double l1_distance(const ArrivalDistribution& a, const ArrivalDistribution& b) {
  require_normalized(a, "l1_distance");
  require_normalized(b, "l1_distance");
  const auto [ca, cb] = on_common_grid(a, b);
  return trapezoid(ca.times, RealArray((ca.density - cb.density).abs()));
}

double ks_distance(const ArrivalDistribution& a, const ArrivalDistribution& b) {
  require_normalized(a, "ks_distance");
  require_normalized(b, "ks_distance");
  const auto [ca, cb] = on_common_grid(a, b);
  const RealArray fa = cumulative_trapezoid(ca.times, ca.density);
  const RealArray fb = cumulative_trapezoid(cb.times, cb.density);
  return (fa - fb).abs().maxCoeff();
}

double ks_distance_samples(std::vector<double> samples, const ArrivalDistribution& ref) {
  require_normalized(ref, "ks_distance_samples");
  if (samples.empty()) throw std::invalid_argument("ks_distance_samples: no samples");
  std::sort(samples.begin(), samples.end());
  const RealArray cdf = cumulative_trapezoid(ref.times, ref.density);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double farr = std::clamp(interp_at(ref.times, cdf, samples[i]), 0.0, 1.0);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - farr,
                             farr - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace toa
