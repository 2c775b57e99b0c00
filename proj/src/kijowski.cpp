#include "toa/kijowski.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "toa/errors.hpp"

namespace toa {

namespace {

void require_increasing(const RealArray& t) {
  if (t.size() < 1) throw std::invalid_argument("kijowski: empty time grid");
  for (Index i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("kijowski: times must be strictly increasing");
}

}  // namespace

double positive_momentum_mass(const GaussianPacketSpec& packet) {
  // sigma_k = m*dv and k0 = m*v, so the z-score k0/sigma_k is mass-free.
  const double z = packet.v_mean / packet.dv;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

ArrivalDistribution kijowski_distribution(const KijowskiRequest& req, const InternalAtom& atom) {
  require_increasing(req.times);
  if (req.nodes < 2048) throw config_error("kijowski: nodes must be >= 2048");
  if (!(req.packet.dv > 0.0)) throw config_error("kijowski: packet dv must be positive");
  const double pos_mass = positive_momentum_mass(req.packet);
  if (!(pos_mass > 0.999)) {
    std::ostringstream msg;
    msg << "kijowski: packet has positive-momentum mass " << pos_mass
        << " but the positive-sector formula requires > 0.999";
    throw config_error(msg.str());
  }

  const double m = atom.mass;
  const double sigma_k = m * req.packet.dv;
  const double k0 = m * req.packet.v_mean;
  const double t_off = req.packet.t_offset;
  const double x_orig = req.packet.x0 - req.packet.v_mean * t_off;
  const double k_lo = std::max(0.0, k0 - 8.0 * sigma_k);
  const double k_hi = k0 + 8.0 * sigma_k;
  const double amp_norm = std::pow(2.0 * std::numbers::pi * sigma_k * sigma_k, -0.25);

  // One nested node set: fine = half spacing of the requested rule.  Each
  // node carries two quadrature weights so both rules come out of a single
  // pass, and their pointwise agreement is the convergence check.
  const Index coarse_intervals = req.nodes - 1;
  const Index nf = 2 * coarse_intervals + 1;
  const double h = (k_hi - k_lo) / static_cast<double>(nf - 1);

  ComplexArray c_fine(nf), c_coarse(nf);
  RealArray omega_k(nf);
  for (Index j = 0; j < nf; ++j) {
    const double k = k_lo + h * static_cast<double>(j);
    const double dk = (k - k0) / (2.0 * sigma_k);
    const Complex phi = amp_norm * std::exp(-dk * dk) *
                        std::exp(-I * (k * x_orig + k * k * t_off / (2.0 * m)));
    const Complex base = std::sqrt(k) * phi * std::exp(I * k * req.arrival_point);
    double wf = (j == 0 || j == nf - 1) ? 0.5 * h : h;
    double wc = 0.0;
    if (j % 2 == 0) wc = (j == 0 || j == nf - 1) ? h : 2.0 * h;
    c_fine[j] = base * wf;
    c_coarse[j] = base * wc;
    omega_k[j] = k * k / (2.0 * m);
  }

  const double scale = 1.0 / (2.0 * std::numbers::pi * m);
  ArrivalDistribution out{req.times, RealArray(req.times.size()), 0.0, false};
  double worst = 0.0;
  for (Index i = 0; i < req.times.size(); ++i) {
    const double t = req.times[i];
    Complex af = 0.0, ac = 0.0;
    for (Index j = 0; j < nf; ++j) {
      const Complex ph = std::exp(-I * (omega_k[j] * t));
      af += c_fine[j] * ph;
      ac += c_coarse[j] * ph;
    }
    const double pf = scale * std::norm(af);
    const double pc = scale * std::norm(ac);
    worst = std::max(worst, std::abs(pf - pc));
    out.density[i] = pf;
  }
  if (worst >= 1e-8) {
    std::ostringstream msg;
    msg << "kijowski: quadrature not converged, halving the spacing moved a "
           "density sample by "
        << worst << "; increase nodes";
    throw numeric_error(msg.str());
  }
  out.total_mass = trapezoid(out.times, out.density);
  return out;
}

ArrivalDistribution kijowski_from_amplitudes(const ComplexArray& phi, const Grid& grid,
                                             double arrival_point, const RealArray& times,
                                             double mass) {
  require_increasing(times);
  if (phi.size() != grid.size())
    throw std::invalid_argument("kijowski_from_amplitudes: size mismatch");

  const Index half = grid.size() / 2;
  ComplexArray coeff(half);
  RealArray omega_k(half);
  const double dk = grid.dk();
  for (Index j = 1; j < half; ++j) {
    const double k = grid.k(j);
    coeff[j] = dk * std::sqrt(k) * phi[j] * std::exp(I * k * arrival_point);
    omega_k[j] = k * k / (2.0 * mass);
  }
  coeff[0] = 0.0;  // sqrt(k) kills the k = 0 bin
  omega_k[0] = 0.0;

  const double scale = 1.0 / (2.0 * std::numbers::pi * mass);
  ArrivalDistribution out{times, RealArray(times.size()), 0.0, false};
  for (Index i = 0; i < times.size(); ++i) {
    Complex a = 0.0;
    for (Index j = 0; j < half; ++j) a += coeff[j] * std::exp(-I * (omega_k[j] * times[i]));
    out.density[i] = scale * std::norm(a);
  }
  out.total_mass = trapezoid(out.times, out.density);
  return out;
}

}  // namespace toa
