#pragma once

#include <string>
#include <vector>

#include "toa/types.hpp"

namespace toa {

// CODATA values.
inline constexpr double kHbarSI = 1.054571817e-34;        // J s
inline constexpr double kAtomicMassKg = 1.66053906660e-27;  // kg

/// Atom species in SI units.
struct AtomParams {
  double mass_kg = 0.0;
  double gamma_rad_s = 0.0;  // spontaneous decay rate, inverse lifetime
  std::string label;
};

/// Looks up a species preset ("Cs133") by name.
/// Throws config_error for unknown names, listing the valid presets.
AtomParams resolve_species(const std::string& name);

/// Names of all built-in presets.
std::vector<std::string> known_species();

// Internal unit system: length in um, time in us, hbar = 1.  All dynamic
// quantities then sit comfortably within double range (1e-4 .. 1e3 for the
// cold-atom regime) and the kinetic phase needs only hbar/m as a single
// scale.  Mass is stored as m/hbar in us/um^2.
struct InternalAtom {
  double mass = 0.0;         // m/hbar, us/um^2
  double gamma = 0.0;        // 1/us
  std::string label;

  double hbar_over_m() const { return 1.0 / mass; }
};

namespace units {

// One scale factor per quantity kind; conversions are exact scalings.
inline double velocity_cm_s_to_internal(double v) { return v / 100.0; }  // um/us
inline double velocity_internal_to_cm_s(double v) { return v * 100.0; }
inline double rate_rad_s_to_internal(double w) { return w * 1e-6; }  // 1/us
inline double rate_internal_to_rad_s(double w) { return w * 1e6; }
inline double time_s_to_internal(double t) { return t * 1e6; }  // us
inline double time_internal_to_s(double t) { return t * 1e-6; }
inline double length_m_to_internal(double x) { return x * 1e6; }  // um
inline double length_internal_to_m(double x) { return x * 1e-6; }
// m/hbar in s/m^2 = 1e-6 us/um^2.
inline double mass_kg_to_internal(double m) { return m / kHbarSI * 1e-6; }
inline double mass_internal_to_kg(double m) { return m * kHbarSI * 1e6; }

}  // namespace units

/// Converts a species to internal units.  Throws config_error on
/// non-finite or non-physical values (mass <= 0, gamma < 0).
InternalAtom to_internal(const AtomParams& atom);

}  // namespace toa
