#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toa/grid.hpp"
#include "toa/laser.hpp"
#include "toa/types.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

struct GridParams {
  double x_min_um = 0.0;
  double x_max_um = 0.0;
  Index n = 0;

  Grid make() const { return Grid(x_min_um, x_max_um, n); }
};

struct TimeParams {
  double dt_us = 0.0;
  double t_max_us = 0.0;
  Index sample_stride = 10;
};

struct McParams {
  bool present = false;
  Index n_traj = 0;
  std::uint64_t seed = 1;
  Index bins = 200;
};

struct SweepParams {
  bool present = false;
  std::vector<double> omega0_gammas;
  std::vector<double> velocities_cm_s;
};

struct KijowskiParams {
  double arrival_point_um = 0.0;
  Index nodes = 2048;
};

/// Fully validated run description, all physics fields in internal units
/// (um, us, hbar = 1); packet velocities are converted from the cm/s the
/// file uses.  Invalid or inconsistent input never leaves parse_config.
struct SimulationConfig {
  InternalAtom atom;
  LaserProfile laser;  // omega0 in rad/us
  std::vector<GaussianPacketSpec> packets;
  GridParams grid;
  TimeParams time;
  McParams mc;
  SweepParams sweep;
  KijowskiParams kijowski;
  std::string output_dir = "out";

  RealArray sample_times() const;
  double laser_edge() const {
    return laser.shape == LaserProfile::Shape::step ? laser.edge : laser.center;
  }
};

/// Strict flat-INI reader: [section] headers, key = value lines, full-line
/// # or ; comments.  Unknown sections or keys, duplicates (except repeated
/// [packet] blocks), and physics invariant violations all raise config_error
/// naming the offender.
SimulationConfig parse_config(const std::string& path);

}  // namespace toa
