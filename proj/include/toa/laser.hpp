#pragma once

#include <cmath>

#include "toa/errors.hpp"
#include "toa/types.hpp"

namespace toa {

/// Spatial Rabi-frequency profile Omega(x) of the detection laser.
/// step: Omega0 for x >= edge, 0 below (the edge point itself is lit).
/// gaussian: Omega0 * exp(-(x - center)^2 / (2 width^2)).
struct LaserProfile {
  enum class Shape { step, gaussian };

  Shape shape = Shape::step;
  double omega0 = 0.0;  // rad/us
  double edge = 0.0;    // um, step only
  double center = 0.0;  // um, gaussian only
  double width = 1.0;   // um, gaussian only (> 0)

  void validate() const {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0))
      throw config_error("laser: omega0 must be finite and non-negative");
    if (shape == Shape::gaussian && !(width > 0.0))
      throw config_error("laser: gaussian width must be positive");
  }
};

inline double omega_at(const LaserProfile& laser, double x) {
  switch (laser.shape) {
    case LaserProfile::Shape::step:
      return x >= laser.edge ? laser.omega0 : 0.0;
    case LaserProfile::Shape::gaussian: {
      const double u = (x - laser.center) / laser.width;
      return laser.omega0 * std::exp(-0.5 * u * u);
    }
  }
  return 0.0;
}

}  // namespace toa
