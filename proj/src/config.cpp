#include "toa/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
};

std::vector<Section> read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::vector<Section> sections;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(path + ":" + std::to_string(lineno) + ": malformed section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (sections.empty())
      throw config_error(path + ":" + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
    Section& sec = sections.back();
    if (sec.entries.count(key))
      throw config_error(path + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                         "' in [" + sec.name + "]");
    sec.entries[key] = {value, false};
    sec.order.push_back(key);
  }
  return sections;
}

class SectionView {
 public:
  SectionView(Section* sec, std::string context) : sec_(sec), ctx_(std::move(context)) {}

  bool present() const { return sec_ != nullptr; }

  const std::string* find(const std::string& key) const {
    if (!sec_) return nullptr;
    const auto it = sec_->entries.find(key);
    if (it == sec_->entries.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  std::string require(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw config_error(ctx_ + ": missing required key '" + key + "'");
    return *v;
  }

  double number(const std::string& key) const { return to_number(key, require(key)); }

  double number_or(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? to_number(key, *v) : fallback;
  }

  long long integer(const std::string& key) const { return to_integer(key, require(key)); }

  long long integer_or(const std::string& key, long long fallback) const {
    const std::string* v = find(key);
    return v ? to_integer(key, *v) : fallback;
  }

  std::string text_or(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
  }

  std::vector<double> number_list(const std::string& key) const {
    const std::string raw = require(key);
    std::vector<double> out;
    std::string item;
    std::istringstream ss(raw);
    while (std::getline(ss, item, ',')) out.push_back(to_number(key, trim(item)));
    if (out.empty()) throw config_error(ctx_ + ": key '" + key + "' has an empty list");
    return out;
  }

  void finish() const {
    if (!sec_) return;
    for (const auto& key : sec_->order)
      if (!sec_->entries.at(key).used)
        throw config_error(ctx_ + ": unknown key '" + key + "'");
  }

  double to_number(const std::string& key, const std::string& raw) const {
    try {
      size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size() || !std::isfinite(v)) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw config_error(ctx_ + ": key '" + key + "' is not a number: '" + raw + "'");
    }
  }

  long long to_integer(const std::string& key, const std::string& raw) const {
    try {
      size_t pos = 0;
      const long long v = std::stoll(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw config_error(ctx_ + ": key '" + key + "' is not an integer: '" + raw + "'");
    }
  }

 private:
  Section* sec_;
  std::string ctx_;
};

double parse_omega0(const SectionView& sec, const std::string& raw, double gamma_internal) {
  const auto split = raw.find_last_of(" \t");
  if (split != std::string::npos) {
    const std::string unit = trim(raw.substr(split + 1));
    const std::string num = trim(raw.substr(0, split));
    if (unit == "gamma") return sec.to_number("omega0", num) * gamma_internal;
    if (unit == "rad/s") return units::rate_rad_s_to_internal(sec.to_number("omega0", num));
  }
  throw config_error(
      "[laser]: omega0 needs an explicit unit, e.g. 'omega0 = 1.24 gamma' or "
      "'omega0 = 4.13e7 rad/s'; got '" +
      raw + "'");
}

}  // namespace

RealArray SimulationConfig::sample_times() const {
  const auto steps = static_cast<Index>(std::llround(time.t_max_us / time.dt_us));
  const Index count = steps / time.sample_stride + 1;
  RealArray t(count);
  for (Index i = 0; i < count; ++i)
    t[i] = static_cast<double>(i * time.sample_stride) * time.dt_us;
  return t;
}

SimulationConfig parse_config(const std::string& path) {
  std::vector<Section> sections = read_ini(path);

  Section* species = nullptr;
  Section* laser = nullptr;
  Section* grid = nullptr;
  Section* time = nullptr;
  Section* mc = nullptr;
  Section* sweep = nullptr;
  Section* kijowski = nullptr;
  Section* output = nullptr;
  std::vector<Section*> packets;

  const std::map<std::string, Section**> slots = {
      {"species", &species}, {"laser", &laser},       {"grid", &grid},
      {"time", &time},       {"mc", &mc},             {"sweep", &sweep},
      {"kijowski", &kijowski}, {"output", &output}};

  for (Section& sec : sections) {
    if (sec.name == "packet") {
      packets.push_back(&sec);
      continue;
    }
    const auto it = slots.find(sec.name);
    if (it == slots.end())
      throw config_error(path + ":" + std::to_string(sec.line) + ": unknown section [" +
                         sec.name + "]");
    if (*it->second)
      throw config_error(path + ":" + std::to_string(sec.line) + ": duplicate section [" +
                         sec.name + "]");
    *it->second = &sec;
  }

  SimulationConfig cfg;

  {
    SectionView v(species, "[species]");
    if (!v.present()) throw config_error(path + ": missing required section [species]");
    if (const std::string* name = v.find("name")) {
      cfg.atom = to_internal(resolve_species(*name));
    } else {
      AtomParams atom;
      atom.mass_kg = v.number("mass_u") * kAtomicMassKg;
      atom.gamma_rad_s = v.number("gamma_rad_s");
      atom.label = "custom";
      cfg.atom = to_internal(atom);
    }
    v.finish();
  }

  {
    SectionView v(laser, "[laser]");
    if (!v.present()) throw config_error(path + ": missing required section [laser]");
    const std::string shape = v.text_or("shape", "step");
    if (shape == "step") {
      cfg.laser.shape = LaserProfile::Shape::step;
      cfg.laser.edge = v.number_or("edge_um", 0.0);
    } else if (shape == "gaussian") {
      cfg.laser.shape = LaserProfile::Shape::gaussian;
      cfg.laser.center = v.number("center_um");
      cfg.laser.width = v.number("width_um");
    } else {
      throw config_error("[laser]: shape must be 'step' or 'gaussian', got '" + shape + "'");
    }
    cfg.laser.omega0 = parse_omega0(v, v.require("omega0"), cfg.atom.gamma);
    cfg.laser.validate();
    v.finish();
  }

  if (packets.empty()) throw config_error(path + ": at least one [packet] section required");
  double weight_sum = 0.0;
  for (size_t i = 0; i < packets.size(); ++i) {
    SectionView v(packets[i], "[packet] #" + std::to_string(i + 1));
    GaussianPacketSpec p;
    p.x0 = v.number("x0_um");
    p.v_mean = units::velocity_cm_s_to_internal(v.number("v_cm_s"));
    p.dv = units::velocity_cm_s_to_internal(v.number("dv_cm_s"));
    p.weight = v.number_or("weight", 1.0);
    if (!(p.dv > 0.0))
      throw config_error("[packet] #" + std::to_string(i + 1) + ": dv_cm_s must be positive");
    if (!(p.weight > 0.0))
      throw config_error("[packet] #" + std::to_string(i + 1) + ": weight must be positive");
    weight_sum += p.weight;
    cfg.packets.push_back(p);
    v.finish();
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw config_error("[packet]: mixture weights must sum to 1, got " +
                       std::to_string(weight_sum));

  {
    SectionView v(grid, "[grid]");
    if (!v.present()) throw config_error(path + ": missing required section [grid]");
    cfg.grid.x_min_um = v.number("x_min_um");
    cfg.grid.x_max_um = v.number("x_max_um");
    cfg.grid.n = v.integer("n");
    v.finish();
  }

  {
    SectionView v(time, "[time]");
    if (!v.present()) throw config_error(path + ": missing required section [time]");
    cfg.time.dt_us = v.number("dt_us");
    cfg.time.t_max_us = v.number("t_max_us");
    cfg.time.sample_stride = v.integer_or("sample_stride", 10);
    v.finish();
  }

  {
    SectionView v(mc, "[mc]");
    if (v.present()) {
      cfg.mc.present = true;
      cfg.mc.n_traj = v.integer("n_traj");
      cfg.mc.seed = static_cast<std::uint64_t>(v.integer_or("seed", 1));
      cfg.mc.bins = v.integer_or("bins", 200);
      if (cfg.mc.n_traj < 1) throw config_error("[mc]: n_traj must be >= 1");
      if (cfg.mc.bins < 1) throw config_error("[mc]: bins must be >= 1");
    }
    v.finish();
  }

  {
    SectionView v(sweep, "[sweep]");
    if (v.present()) {
      cfg.sweep.present = true;
      if (v.find("omega0_gammas")) cfg.sweep.omega0_gammas = v.number_list("omega0_gammas");
      if (v.find("velocities_cm_s"))
        cfg.sweep.velocities_cm_s = v.number_list("velocities_cm_s");
      if (cfg.sweep.omega0_gammas.empty() && cfg.sweep.velocities_cm_s.empty())
        throw config_error("[sweep]: needs omega0_gammas and/or velocities_cm_s");
      for (const double g : cfg.sweep.omega0_gammas)
        if (!(g >= 0.0)) throw config_error("[sweep]: omega0_gammas must be non-negative");
    }
    v.finish();
  }

  {
    SectionView v(kijowski, "[kijowski]");
    if (v.present()) {
      cfg.kijowski.arrival_point_um = v.number_or("arrival_point_um", 0.0);
      cfg.kijowski.nodes = v.integer_or("nodes", 2048);
      if (cfg.kijowski.nodes < 2048) throw config_error("[kijowski]: nodes must be >= 2048");
    }
    v.finish();
  }

  {
    SectionView v(output, "[output]");
    if (v.present()) cfg.output_dir = v.text_or("dir", cfg.output_dir);
    v.finish();
  }

  // Cross-field physics validation, all before any run starts.
  const Grid g = cfg.grid.make();
  for (const GaussianPacketSpec& p : cfg.packets) g.require_resolves(p, cfg.atom.mass);

  if (!(cfg.time.dt_us > 0.0)) throw config_error("[time]: dt_us must be positive");
  if (!(cfg.time.t_max_us > 0.0)) throw config_error("[time]: t_max_us must be positive");
  if (cfg.time.sample_stride < 1) throw config_error("[time]: sample_stride must be >= 1");
  const double rate = std::max(cfg.laser.omega0, cfg.atom.gamma);
  if (cfg.time.dt_us * rate >= 0.5) {
    std::ostringstream msg;
    msg << "[time]: dt_us too coarse, dt*max(omega0,gamma) = " << cfg.time.dt_us * rate
        << " >= 0.5; use dt_us < " << 0.5 / rate;
    throw config_error(msg.str());
  }
  const double steps_real = cfg.time.t_max_us / cfg.time.dt_us;
  const auto steps = static_cast<Index>(std::llround(steps_real));
  if (steps < 1 || std::abs(static_cast<double>(steps) * cfg.time.dt_us - cfg.time.t_max_us) >
                       1e-9 * std::max(1.0, cfg.time.t_max_us))
    throw config_error("[time]: t_max_us must be an integer multiple of dt_us");
  if (steps % cfg.time.sample_stride != 0)
    throw config_error("[time]: step count " + std::to_string(steps) +
                       " must be a multiple of sample_stride");

  return cfg;
}

}  // namespace toa
