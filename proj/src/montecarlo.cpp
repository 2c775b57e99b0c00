#include "toa/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "toa/errors.hpp"
#include "toa/two_level.hpp"

namespace toa {

namespace {

Index checked_steps(double t_max, double dt) {
  const auto steps = static_cast<Index>(std::llround(t_max / dt));
  if (steps < 1 ||
      std::abs(static_cast<double>(steps) * dt - t_max) > 1e-9 * std::max(1.0, t_max))
    throw config_error("trajectory: t_max must be an integer multiple of dt");
  return steps;
}

void require_mc_dt(const Propagator& prop) {
  const double rate = std::max(prop.laser().omega0, prop.gamma());
  if (prop.dt() * rate >= 0.1) {
    std::ostringstream msg;
    msg << "trajectory: dt*max(omega0,gamma) = " << prop.dt() * rate
        << " >= 0.1; jump probabilities need dt < " << 0.1 / rate;
    throw config_error(msg.str());
  }
}

}  // namespace

TrajectoryRecord run_trajectory(Propagator& prop, const SpinorField& initial, double t_max,
                                std::uint64_t seed, RealArray* rho22_trace) {
  require_mc_dt(prop);
  const double dt = prop.dt();
  const double gamma = prop.gamma();
  const Index steps = checked_steps(t_max, dt);

  SpinorField f = initial;
  const CounterRng rng{seed};
  TrajectoryRecord rec;
  rec.seed = seed;
  if (rho22_trace) {
    rho22_trace->resize(steps + 1);
    const double n0 = f.norm();
    (*rho22_trace)[0] = n0 > 0.0 ? f.excited_norm() / n0 : 0.0;
  }

  for (Index s = 0; s < steps; ++s) {
    prop.strang_step(f);
    const double n = f.norm();
    const double p2 = f.excited_norm();
    if (!std::isfinite(n) || !(n > 0.0))
      throw numeric_error("trajectory: conditional norm became invalid");
    if (rho22_trace) (*rho22_trace)[s + 1] = p2 / n;
    const double u = rng.uniform(static_cast<std::uint64_t>(s));
    if (u < jump_probability(gamma, dt, p2, n)) {
      rec.photon_times.push_back(static_cast<double>(s + 1) * dt);
      const double amp = 1.0 / std::sqrt(p2);
      f.ground = f.excited * amp;
      f.excited.setZero();
      if (rho22_trace) (*rho22_trace)[s + 1] = 0.0;
    }
  }
  rec.survived = rec.photon_times.empty();
  return rec;
}

HistogramResult first_photon_histogram(Propagator& prop, const SpinorField& initial,
                                       double t_max, Index n_traj, std::uint64_t base_seed,
                                       Index bins, int threads) {
  require_mc_dt(prop);
  if (n_traj < 1) throw config_error("montecarlo: n_traj must be >= 1");
  if (bins < 1) throw config_error("montecarlo: bins must be >= 1");
  const Index steps = checked_steps(t_max, prop.dt());
  const double dt = prop.dt();
  const double gamma = prop.gamma();

  // Shared no-jump prefix: thresholds from one deterministic propagation.
  const PropagationRecord det = prop.propagate(initial, {t_max, 1, 1e-6});
  RealArray threshold(steps);
  for (Index s = 0; s < steps; ++s)
    threshold[s] = jump_probability(gamma, dt, det.p2[s + 1], det.norm[s + 1]);

  const double width = t_max / static_cast<double>(bins);
  struct Chunk {
    std::vector<long long> counts;
    std::vector<double> first_times;
    Index survived = 0;
  };
  const int nchunks = std::max(1, std::min<int>(threads, static_cast<int>(n_traj)));
  std::vector<Chunk> chunks(nchunks);

  const auto scan = [&](int c, Index lo, Index hi) {
    Chunk& out = chunks[c];
    out.counts.assign(static_cast<size_t>(bins), 0);
    for (Index i = lo; i < hi; ++i) {
      const CounterRng rng{base_seed + static_cast<std::uint64_t>(i)};
      bool hit = false;
      for (Index s = 0; s < steps; ++s) {
        if (rng.uniform(static_cast<std::uint64_t>(s)) < threshold[s]) {
          const double t = static_cast<double>(s + 1) * dt;
          const auto b = std::min<Index>(static_cast<Index>(t / width), bins - 1);
          ++out.counts[static_cast<size_t>(b)];
          out.first_times.push_back(t);
          hit = true;
          break;
        }
      }
      if (!hit) ++out.survived;
    }
  };

  if (nchunks == 1) {
    scan(0, 0, n_traj);
  } else {
    std::vector<std::thread> pool;
    const Index per = (n_traj + nchunks - 1) / nchunks;
    for (int c = 0; c < nchunks; ++c) {
      const Index lo = per * c;
      const Index hi = std::min(n_traj, lo + per);
      if (lo >= hi) break;
      pool.emplace_back(scan, c, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  HistogramResult res;
  res.n_traj = n_traj;
  res.bin_width = width;
  res.bin_centers = RealArray(bins);
  res.counts = RealArray::Zero(bins);
  for (Index b = 0; b < bins; ++b)
    res.bin_centers[b] = (static_cast<double>(b) + 0.5) * width;
  for (const Chunk& c : chunks) {
    if (c.counts.empty()) continue;
    for (Index b = 0; b < bins; ++b) res.counts[b] += static_cast<double>(c.counts[b]);
    res.first_times.insert(res.first_times.end(), c.first_times.begin(), c.first_times.end());
    res.survived += c.survived;
  }

  const double n = static_cast<double>(n_traj);
  res.density = res.counts / (n * width);
  res.se_density = RealArray(bins);
  for (Index b = 0; b < bins; ++b) {
    const double p = res.counts[b] / n;
    res.se_density[b] = std::sqrt(p * (1.0 - p) / n) / width;
  }
  return res;
}

namespace {

struct BlochState {
  double r11, r22, re12, im12;
};

BlochState bloch_rhs(double omega, double gamma, const BlochState& y) {
  return {
      gamma * y.r22 - omega * y.im12,
      -gamma * y.r22 + omega * y.im12,
      -0.5 * gamma * y.re12,
      -0.5 * omega * (y.r22 - y.r11) - 0.5 * gamma * y.im12,
  };
}

BlochState axpy(const BlochState& y, double h, const BlochState& d) {
  return {y.r11 + h * d.r11, y.r22 + h * d.r22, y.re12 + h * d.re12, y.im12 + h * d.im12};
}

void rk4_advance(double omega, double gamma, BlochState& y, double h) {
  const BlochState k1 = bloch_rhs(omega, gamma, y);
  const BlochState k2 = bloch_rhs(omega, gamma, axpy(y, 0.5 * h, k1));
  const BlochState k3 = bloch_rhs(omega, gamma, axpy(y, 0.5 * h, k2));
  const BlochState k4 = bloch_rhs(omega, gamma, axpy(y, h, k3));
  y.r11 += h / 6.0 * (k1.r11 + 2.0 * k2.r11 + 2.0 * k3.r11 + k4.r11);
  y.r22 += h / 6.0 * (k1.r22 + 2.0 * k2.r22 + 2.0 * k3.r22 + k4.r22);
  y.re12 += h / 6.0 * (k1.re12 + 2.0 * k2.re12 + 2.0 * k3.re12 + k4.re12);
  y.im12 += h / 6.0 * (k1.im12 + 2.0 * k2.im12 + 2.0 * k3.im12 + k4.im12);
}

}  // namespace

std::vector<TwoLevelDensity> lindblad_0d(double omega, double gamma, const RealArray& t_grid,
                                         TwoLevelDensity initial) {
  if (t_grid.size() < 1) throw std::invalid_argument("lindblad_0d: empty time grid");
  const double rate = std::max(omega, gamma);
  const double h_max = rate > 0.0 ? 1e-3 / rate : std::numeric_limits<double>::infinity();

  BlochState y{initial.rho11, initial.rho22, initial.rho12.real(), initial.rho12.imag()};
  std::vector<TwoLevelDensity> out;
  out.reserve(t_grid.size());
  out.push_back(initial);
  for (Index i = 1; i < t_grid.size(); ++i) {
    const double span = t_grid[i] - t_grid[i - 1];
    if (!(span > 0.0)) throw std::invalid_argument("lindblad_0d: times must increase");
    const auto m = std::isfinite(h_max)
                       ? std::max<Index>(1, static_cast<Index>(std::ceil(span / h_max)))
                       : Index{1};
    const double h = span / static_cast<double>(m);
    for (Index s = 0; s < m; ++s) rk4_advance(omega, gamma, y, h);
    out.push_back({y.r11, y.r22, Complex(y.re12, y.im12)});
  }
  return out;
}

void lindblad_0d_conditional(double omega, double gamma, const RealArray& t_grid,
                             RealArray& n_out, RealArray& p2_out) {
  n_out.resize(t_grid.size());
  p2_out.resize(t_grid.size());
  for (Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t < 0.0) throw std::invalid_argument("lindblad_0d_conditional: negative time");
    // Split so the overdamped cosh inside the exponential cannot overflow.
    const auto m = 1 + static_cast<Index>(gamma * t / 2000.0);
    const TwoLevelHalfStep u =
        two_level_exponential(omega, gamma, t / static_cast<double>(m));
    Complex g = 1.0, e = 0.0;
    for (Index s = 0; s < m; ++s) {
      const Complex g2 = u.e11 * g + u.e12 * e;
      e = u.e12 * g + u.e22 * e;
      g = g2;
    }
    n_out[i] = std::norm(g) + std::norm(e);
    p2_out[i] = std::norm(e);
  }
}

}  // namespace toa
