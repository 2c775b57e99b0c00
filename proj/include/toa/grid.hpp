#pragma once

#include <numbers>

#include "toa/types.hpp"

namespace toa {

struct GaussianPacketSpec;

/// Uniform periodic spatial grid with the matching discrete momentum grid.
/// n must be a power of two.  Momentum values follow standard DFT ordering:
/// k_j = 2*pi*j/(n*dx) for j < n/2 and 2*pi*(j-n)/(n*dx) above.
class Grid {
 public:
  Grid(double x_min, double x_max, Index n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_min_ + dx_ * static_cast<double>(n_); }
  double dx() const { return dx_; }
  Index size() const { return n_; }

  double x(Index j) const { return x_min_ + dx_ * static_cast<double>(j); }
  double k(Index j) const {
    const Index half = n_ / 2;
    return dk() * static_cast<double>(j < half ? j : j - n_);
  }
  double dk() const { return 2.0 * std::numbers::pi / (dx_ * static_cast<double>(n_)); }
  double k_max() const { return std::numbers::pi / dx_; }

  RealArray x_array() const;
  RealArray k_array() const;

  /// Anti-aliasing and edge-containment checks for an initial packet:
  /// k_max must exceed m*(|v| + 6*dv) and the packet amplitude at both
  /// edges must be below 1e-8 of its peak.  Throws config_error with the
  /// required dx or extent otherwise.
  void require_resolves(const GaussianPacketSpec& spec, double mass) const;

 private:
  double x_min_;
  double dx_;
  Index n_;
};

}  // namespace toa
