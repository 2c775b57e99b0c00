#include "toa/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/two_level.hpp"

namespace toa {

Propagator::Propagator(const Grid& grid, const LaserProfile& laser, const InternalAtom& atom,
                       double dt, bool frozen_atom)
    : grid_(grid),
      laser_(laser),
      atom_(atom),
      dt_(dt),
      frozen_(frozen_atom),
      v11_(grid.size()),
      v12_(grid.size()),
      v22_(grid.size()),
      kphase_(grid.size()),
      scratch_(grid.size()),
      fft_(grid.size()) {
  laser.validate();
  if (!(dt > 0.0)) throw config_error("propagator: dt must be positive");
  const double rate = std::max(laser.omega0, atom_.gamma);
  if (dt * rate >= 0.5) {
    std::ostringstream msg;
    msg << "propagator: dt too coarse, dt*max(omega0,gamma) = " << dt * rate
        << " >= 0.5; use dt < " << 0.5 / rate;
    throw config_error(msg.str());
  }

  const Index n = grid_.size();
  const double tau = 0.5 * dt;
  for (Index j = 0; j < n; ++j) {
    const TwoLevelHalfStep m = two_level_exponential(omega_at(laser, grid_.x(j)), atom_.gamma, tau);
    v11_[j] = m.e11;
    v12_[j] = m.e12;
    v22_[j] = m.e22;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    const double k = grid_.k(j);
    kphase_[j] = std::exp(-I * (k * k * dt / (2.0 * atom_.mass))) * inv_n;
  }
}

void Propagator::half_potential_step(SpinorField& f) {
  scratch_ = v11_ * f.ground + v12_ * f.excited;
  f.excited = v12_ * f.ground + v22_ * f.excited;
  f.ground = scratch_;
}

void Propagator::kinetic_full_step(SpinorField& f) {
  auto buf = fft_.view();
  buf = f.ground;
  fft_.forward();
  buf *= kphase_;
  fft_.backward();
  f.ground = buf;
  buf = f.excited;
  fft_.forward();
  buf *= kphase_;
  fft_.backward();
  f.excited = buf;
}

void Propagator::strang_step(SpinorField& f) {
  half_potential_step(f);
  if (!frozen_) kinetic_full_step(f);
  half_potential_step(f);
}

double Propagator::edge_density(const SpinorField& f) const {
  const Index n = grid_.size();
  const Index m = std::min<Index>(8, n);
  double peak = 0.0;
  for (Index j = 0; j < m; ++j) {
    peak = std::max(peak, std::norm(f.ground[j]) + std::norm(f.excited[j]));
    const Index r = n - 1 - j;
    peak = std::max(peak, std::norm(f.ground[r]) + std::norm(f.excited[r]));
  }
  return peak;
}

PropagationRecord Propagator::propagate(const SpinorField& initial, const PropagateOptions& opt) {
  if (!(opt.t_max > 0.0)) throw config_error("propagate: t_max must be positive");
  if (opt.sample_stride < 1) throw config_error("propagate: sample_stride must be >= 1");
  const double steps_real = opt.t_max / dt_;
  const auto steps = static_cast<Index>(std::llround(steps_real));
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt_ - opt.t_max) >
                       1e-9 * std::max(1.0, opt.t_max))
    throw config_error("propagate: t_max must be an integer multiple of dt");
  if (steps % opt.sample_stride != 0)
    throw config_error("propagate: step count must be a multiple of sample_stride");

  const Index n_samples = steps / opt.sample_stride + 1;
  RealArray times(n_samples), norm(n_samples), p2(n_samples);
  SpinorField f = initial;
  double leak = 0.0;

  const auto sample = [&](Index i) {
    times[i] = static_cast<double>(i * opt.sample_stride) * dt_;
    norm[i] = f.norm();
    p2[i] = f.excited_norm();
    if (!std::isfinite(norm[i]))
      throw numeric_error("propagate: state norm became non-finite");
    const double ed = edge_density(f);
    leak = std::max(leak, ed);
    if (ed > opt.edge_leak_threshold) {
      std::ostringstream msg;
      msg << "propagate: boundary density " << ed << " exceeds "
          << opt.edge_leak_threshold << " at t = " << times[i]
          << "; enlarge the grid";
      throw numeric_error(msg.str());
    }
  };

  sample(0);
  for (Index i = 1; i < n_samples; ++i) {
    for (Index s = 0; s < opt.sample_stride; ++s) strang_step(f);
    sample(i);
  }
  return {std::move(times), std::move(norm), std::move(p2), leak, std::move(f)};
}

}  // namespace toa
