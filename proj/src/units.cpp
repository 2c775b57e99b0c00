#include "toa/units.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

namespace {

const std::vector<AtomParams>& presets() {
  // Cs133: standard atomic mass 132.905 u; gamma = 2*pi*5.3 MHz for the
  // 6S1/2 <-> 6P3/2 resonance line (lifetime 30.0 ns).
  static const std::vector<AtomParams> table = {
      {132.905 * kAtomicMassKg, 2.0 * std::numbers::pi * 5.3e6, "Cs133"},
  };
  return table;
}

}  // namespace

std::vector<std::string> known_species() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.label);
  return names;
}

AtomParams resolve_species(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.label == name) return p;
  }
  std::ostringstream msg;
  msg << "unknown species '" << name << "'; known presets:";
  for (const auto& p : presets()) msg << " " << p.label;
  msg << " (or give mass_kg and gamma_rad_s explicitly)";
  throw config_error(msg.str());
}

InternalAtom to_internal(const AtomParams& atom) {
  if (!std::isfinite(atom.mass_kg) || atom.mass_kg <= 0.0)
    throw config_error("atom mass must be finite and positive, got " +
                       std::to_string(atom.mass_kg) + " kg");
  if (!std::isfinite(atom.gamma_rad_s) || atom.gamma_rad_s < 0.0)
    throw config_error("decay rate gamma must be finite and non-negative, got " +
                       std::to_string(atom.gamma_rad_s) + " rad/s");
  InternalAtom out;
  out.mass = units::mass_kg_to_internal(atom.mass_kg);
  out.gamma = units::rate_rad_s_to_internal(atom.gamma_rad_s);
  out.label = atom.label;
  return out;
}

}  // namespace toa
