#include "toa/grid.hpp"

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

Grid::Grid(double x_min, double x_max, Index n) : x_min_(x_min), n_(n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw config_error("grid n must be a power of two >= 2, got " + std::to_string(n));
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw config_error("grid extent invalid: x_min=" + std::to_string(x_min) +
                       " x_max=" + std::to_string(x_max));
  dx_ = (x_max - x_min) / static_cast<double>(n);
}

RealArray Grid::x_array() const {
  RealArray out(n_);
  for (Index j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

RealArray Grid::k_array() const {
  RealArray out(n_);
  for (Index j = 0; j < n_; ++j) out[j] = k(j);
  return out;
}

void Grid::require_resolves(const GaussianPacketSpec& spec, double mass) const {
  const double k_need = mass * (std::abs(spec.v_mean) + 6.0 * spec.dv);
  if (!(k_max() > k_need)) {
    std::ostringstream msg;
    msg << "grid momentum cutoff k_max = " << k_max() << " /um does not exceed m*(|v|+6*dv) = "
        << k_need << " /um; need dx < " << std::numbers::pi / k_need
        << " um (e.g. n >= " << (x_max() - x_min()) * k_need / std::numbers::pi
        << " on the current extent, rounded up to a power of two)";
    throw config_error(msg.str());
  }
  // Tail amplitude at the edges must stay below 1e-8 of the peak:
  // exp(-d^2/(4 sigma^2)) < 1e-8  <=>  d > sqrt(4 ln 1e8) sigma.
  const double sigma = spec.sigma_x(mass);
  const double d_need = std::sqrt(4.0 * std::log(1e8)) * sigma;
  const double d_lo = spec.x0 - x_min();
  const double d_hi = x_max() - spec.x0;
  if (d_lo < d_need || d_hi < d_need) {
    std::ostringstream msg;
    msg << "packet at x0 = " << spec.x0 << " um (sigma = " << sigma
        << " um) is closer than " << d_need << " um to a grid edge ["
        << x_min() << ", " << x_max() << "]; enlarge the extent";
    throw config_error(msg.str());
  }
}

}  // namespace toa
