#include "toa/runner.hpp"

#include <cmath>

#include "toa/errors.hpp"
#include "toa/propagator.hpp"

namespace toa {

SimulationOutcome run_simulation(const SimulationConfig& cfg, bool frozen_atom) {
  const Grid grid = cfg.grid.make();
  Propagator prop(grid, cfg.laser, cfg.atom, cfg.time.dt_us, frozen_atom);
  const PropagateOptions opt{cfg.time.t_max_us, cfg.time.sample_stride, 1e-6};

  SimulationOutcome out;
  double surviving = 0.0, ground = 0.0, k_weighted = 0.0;
  bool first = true;
  for (const GaussianPacketSpec& packet : cfg.packets) {
    const SpinorField field = sample_gaussian(packet, grid, cfg.atom.mass);
    PropagationRecord rec = prop.propagate(field, opt);
    const FractionDiagnostics diag =
        fraction_diagnostics(rec, cfg.atom.gamma, cfg.laser_edge());
    if (first) {
      out.times = rec.times;
      out.norm = rec.norm;
      out.p2 = rec.p2;
      first = false;
    } else {
      out.norm += rec.norm;
      out.p2 += rec.p2;
    }
    out.edge_leak += rec.edge_leak;
    out.diag.dn_dt_end += diag.dn_dt_end;
    out.diag.edge_ground_density += diag.edge_ground_density;
    const double s = rec.final_field.norm();
    const double g = rec.final_field.ground_norm();
    surviving += s;
    ground += g;
    k_weighted += diag.mean_k_ground * g;
  }

  out.diag.ground_fraction = surviving > 1e-9 ? ground / surviving : 1.0;
  out.diag.mean_k_ground = ground > 0.0 ? k_weighted / ground : 0.0;
  if (cfg.atom.gamma == 0.0) {
    out.diag.converged = true;
  } else if (surviving > 1e-9) {
    out.diag.converged = out.diag.dn_dt_end < 1e-6 && out.diag.edge_ground_density < 1e-6 &&
                         out.diag.ground_fraction >= 0.99 && out.diag.mean_k_ground < 0.0;
  } else {
    out.diag.converged = out.diag.dn_dt_end < 1e-6 && out.diag.edge_ground_density < 1e-6;
  }

  const Index last = out.norm.size() - 1;
  out.rejected = out.norm[last];
  out.detected = cfg.atom.gamma == 0.0 ? 0.0 : out.norm[0] - out.norm[last];
  out.pi = pi_from_p2(out.times, out.p2, cfg.atom.gamma);
  out.pi_fd = pi_from_norm_fd(out.times, out.norm);
  return out;
}

ArrivalDistribution run_kijowski(const SimulationConfig& cfg) {
  const RealArray times = cfg.sample_times();
  ArrivalDistribution out{times, RealArray::Zero(times.size()), 0.0, false};
  for (const GaussianPacketSpec& packet : cfg.packets) {
    KijowskiRequest req{packet, cfg.kijowski.arrival_point_um, times, cfg.kijowski.nodes};
    const ArrivalDistribution member = kijowski_distribution(req, cfg.atom);
    out.density += packet.weight * member.density;
  }
  out.total_mass = trapezoid(out.times, out.density);
  return out;
}

CompareOutcome run_compare(const SimulationConfig& cfg, bool frozen_atom) {
  CompareOutcome co;
  co.op = run_simulation(cfg, frozen_atom);
  co.kij = run_kijowski(cfg);
  if (!(co.op.pi.total_mass > 0.0))
    throw numeric_error("compare: operational distribution has no mass (no detections)");
  const ArrivalDistribution a = normalized(co.op.pi);
  const ArrivalDistribution b = normalized(co.kij);
  co.l1 = l1_distance(a, b);
  co.ks = ks_distance(a, b);
  co.mean_op = mean_time(a);
  co.mean_kij = mean_time(b);
  return co;
}

}  // namespace toa
