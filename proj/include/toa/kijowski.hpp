#pragma once

#include "toa/arrival.hpp"
#include "toa/grid.hpp"
#include "toa/types.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

/// Ideal free-motion arrival-time density at arrival_point,
///   Pi_K(t) = 1/(2 pi m) | int_0^inf dk sqrt(k) phi(k) e^{i k X - i k^2 t / (2 m)} |^2,
/// restricted to the positive-momentum sector (hence the precondition on the
/// packet's momentum content).  The packet's weight field is ignored: the
/// density integrates over all t to the packet's positive-momentum mass.
struct KijowskiRequest {
  GaussianPacketSpec packet;
  double arrival_point = 0.0;  // um
  RealArray times;             // us, strictly increasing
  Index nodes = 2048;          // momentum quadrature nodes (>= 2048)
};

/// P(k > 0) of the packet's Gaussian momentum amplitude.
double positive_momentum_mass(const GaussianPacketSpec& packet);

/// Analytic-amplitude route.  phi(k) is evaluated in closed form; the
/// momentum integral is a composite trapezoid on [max(0, k0 - 8 sigma_k),
/// k0 + 8 sigma_k].  Every call also evaluates the half-spacing rule and
/// throws numeric_error if any sampled density moves by 1e-8 or more;
/// the finer result is returned.
ArrivalDistribution kijowski_distribution(const KijowskiRequest& req, const InternalAtom& atom);

/// Grid-amplitude route for states already sampled on a grid (mixture
/// members, propagated fields).  Sums the positive-frequency bins.
ArrivalDistribution kijowski_from_amplitudes(const ComplexArray& phi, const Grid& grid,
                                             double arrival_point, const RealArray& times,
                                             double mass);

}  // namespace toa
