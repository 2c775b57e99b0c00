#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "toa/arrival.hpp"
#include "toa/config.hpp"
#include "toa/errors.hpp"
#include "toa/montecarlo.hpp"
#include "toa/output.hpp"
#include "toa/propagator.hpp"
#include "toa/runner.hpp"
#include "toa/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  bool frozen = false;
  bool quiet = false;
};

void say(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

fs::path ensure_out_dir(const toa::SimulationConfig& cfg, const Options& opt) {
  const fs::path dir = opt.out.empty() ? fs::path(cfg.output_dir) : fs::path(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw toa::io_error("cannot create output directory " + dir.string() + ": " +
                              ec.message());
  return dir;
}

json packet_json(const toa::GaussianPacketSpec& p) {
  return json{{"x0_um", p.x0},
              {"v_cm_s", toa::units::velocity_internal_to_cm_s(p.v_mean)},
              {"dv_cm_s", toa::units::velocity_internal_to_cm_s(p.dv)},
              {"weight", p.weight}};
}

json params_json(const toa::SimulationConfig& cfg, const Options& opt) {
  json laser{{"shape", cfg.laser.shape == toa::LaserProfile::Shape::step ? "step" : "gaussian"},
             {"omega0_per_us", cfg.laser.omega0}};
  if (cfg.atom.gamma > 0.0) laser["omega0_over_gamma"] = cfg.laser.omega0 / cfg.atom.gamma;
  if (cfg.laser.shape == toa::LaserProfile::Shape::step) {
    laser["edge_um"] = cfg.laser.edge;
  } else {
    laser["center_um"] = cfg.laser.center;
    laser["width_um"] = cfg.laser.width;
  }
  json packets = json::array();
  for (const auto& p : cfg.packets) packets.push_back(packet_json(p));
  return json{
      {"species", cfg.atom.label},
      {"mass_internal_us_um2", cfg.atom.mass},
      {"gamma_per_us", cfg.atom.gamma},
      {"laser", laser},
      {"packets", packets},
      {"grid", {{"x_min_um", cfg.grid.x_min_um}, {"x_max_um", cfg.grid.x_max_um},
                {"n", cfg.grid.n}}},
      {"time", {{"dt_us", cfg.time.dt_us}, {"t_max_us", cfg.time.t_max_us},
                {"sample_stride", cfg.time.sample_stride}}},
      {"frozen_atom", opt.frozen},
  };
}

void write_metrics(const fs::path& dir, const json& metrics) {
  toa::write_text_file((dir / "metrics.json").string(), metrics.dump(2) + "\n");
}

json outcome_results(const toa::SimulationOutcome& oc) {
  json results{
      {"detected", oc.detected},
      {"rejected", oc.rejected},
      {"converged", oc.diag.converged},
      {"dn_dt_end_per_us", oc.diag.dn_dt_end},
      {"edge_ground_density_per_um", oc.diag.edge_ground_density},
      {"ground_fraction", oc.diag.ground_fraction},
      {"mean_k_ground_per_um", oc.diag.mean_k_ground},
      {"edge_leak_per_um", oc.edge_leak},
      {"pi_total_mass", oc.pi.total_mass},
      {"fd_gap_linf", (oc.pi.density - oc.pi_fd.density).abs().maxCoeff()},
  };
  if (oc.pi.total_mass > 0.0)
    results["mean_time_us"] = toa::mean_time(toa::normalized(oc.pi));
  else
    results["mean_time_us"] = nullptr;
  return results;
}

void write_timeseries(const fs::path& dir, const toa::SimulationOutcome& oc) {
  toa::write_csv((dir / "timeseries.csv").string(),
                 {{"t_us", &oc.times},
                  {"norm", &oc.norm},
                  {"p2", &oc.p2},
                  {"pi_op_per_us", &oc.pi.density}});
}

void write_kijowski_csv(const fs::path& dir, const toa::ArrivalDistribution& k) {
  toa::write_csv((dir / "kijowski.csv").string(),
                 {{"t_us", &k.times}, {"pi_k_per_us", &k.density}});
}

int cmd_simulate(const toa::SimulationConfig& cfg, const Options& opt) {
  const toa::SimulationOutcome oc = toa::run_simulation(cfg, opt.frozen);
  const fs::path dir = ensure_out_dir(cfg, opt);
  write_timeseries(dir, oc);
  json metrics{{"version", toa::kVersion},
               {"command", "simulate"},
               {"params", params_json(cfg, opt)},
               {"results", outcome_results(oc)}};
  write_metrics(dir, metrics);
  std::ostringstream line;
  line << "simulate: detected " << oc.detected << ", rejected " << oc.rejected
       << (oc.diag.converged ? " (converged)" : " (NOT converged)") << ", wrote "
       << (dir / "timeseries.csv").string();
  say(opt, line.str());
  return 0;
}

int cmd_kijowski(const toa::SimulationConfig& cfg, const Options& opt) {
  const toa::ArrivalDistribution k = toa::run_kijowski(cfg);
  const fs::path dir = ensure_out_dir(cfg, opt);
  write_kijowski_csv(dir, k);
  Eigen::Index peak = 0;
  k.density.maxCoeff(&peak);
  json results{{"total_mass", k.total_mass},
               {"mean_time_us", toa::mean_time(toa::normalized(k))},
               {"peak_time_us", k.times[peak]},
               {"arrival_point_um", cfg.kijowski.arrival_point_um},
               {"quadrature_nodes", cfg.kijowski.nodes}};
  json metrics{{"version", toa::kVersion},
               {"command", "kijowski"},
               {"params", params_json(cfg, opt)},
               {"results", results}};
  write_metrics(dir, metrics);
  std::ostringstream line;
  line << "kijowski: mass " << k.total_mass << ", peak at " << k.times[peak] << " us, wrote "
       << (dir / "kijowski.csv").string();
  say(opt, line.str());
  return 0;
}

int cmd_montecarlo(const toa::SimulationConfig& cfg, const Options& opt) {
  if (!cfg.mc.present)
    throw toa::config_error("montecarlo: config needs an [mc] section");
  if (cfg.packets.size() != 1)
    throw toa::config_error("montecarlo: trajectories support exactly one [packet]");

  const toa::SimulationOutcome oc = toa::run_simulation(cfg, opt.frozen);

  const toa::Grid grid = cfg.grid.make();
  toa::Propagator prop(grid, cfg.laser, cfg.atom, cfg.time.dt_us, opt.frozen);
  const toa::SpinorField field = toa::sample_gaussian(cfg.packets[0], grid, cfg.atom.mass);
  const toa::HistogramResult hist =
      toa::first_photon_histogram(prop, field, cfg.time.t_max_us, cfg.mc.n_traj, cfg.mc.seed,
                                  cfg.mc.bins, opt.threads);

  const fs::path dir = ensure_out_dir(cfg, opt);
  toa::write_csv((dir / "histogram.csv").string(),
                 {{"t_us", &hist.bin_centers},
                  {"count", &hist.counts},
                  {"density_per_us", &hist.density},
                  {"se_density_per_us", &hist.se_density}});

  const double n = static_cast<double>(hist.n_traj);
  const double survived_frac = static_cast<double>(hist.survived) / n;
  json results{{"n_traj", hist.n_traj},
               {"seed", cfg.mc.seed},
               {"bins", hist.bin_centers.size()},
               {"bin_width_us", hist.bin_width},
               {"survived", hist.survived},
               {"survived_fraction", survived_frac},
               {"detected_fraction", 1.0 - survived_frac},
               {"deterministic_rejected", oc.rejected},
               {"deterministic_detected", oc.detected}};
  const double p = oc.rejected;
  const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
  results["survived_sigma_binomial"] = sigma;
  results["survived_deviation_sigmas"] =
      sigma > 0.0 ? std::abs(survived_frac - p) / sigma : 0.0;
  if (!hist.first_times.empty() && oc.pi.total_mass > 0.0)
    results["ks_vs_deterministic"] =
        toa::ks_distance_samples(hist.first_times, toa::normalized(oc.pi));
  else
    results["ks_vs_deterministic"] = nullptr;

  json metrics{{"version", toa::kVersion},
               {"command", "montecarlo"},
               {"params", params_json(cfg, opt)},
               {"results", results}};
  write_metrics(dir, metrics);
  std::ostringstream line;
  line << "montecarlo: " << hist.n_traj << " trajectories, survived fraction "
       << survived_frac << " (deterministic " << oc.rejected << "), wrote "
       << (dir / "histogram.csv").string();
  say(opt, line.str());
  return 0;
}

json compare_results(const toa::CompareOutcome& co) {
  json results = outcome_results(co.op);
  results["kijowski_total_mass"] = co.kij.total_mass;
  results["l1_vs_kijowski"] = co.l1;
  results["ks_vs_kijowski"] = co.ks;
  results["mean_op_us"] = co.mean_op;
  results["mean_kijowski_us"] = co.mean_kij;
  results["mean_delay_us"] = co.mean_op - co.mean_kij;
  return results;
}

void write_compare_files(const fs::path& dir, const toa::CompareOutcome& co) {
  write_timeseries(dir, co.op);
  write_kijowski_csv(dir, co.kij);
  const toa::ArrivalDistribution a = toa::normalized(co.op.pi);
  const toa::ArrivalDistribution b = toa::normalized(co.kij);
  toa::write_svg_overlay((dir / "overlay.svg").string(),
                         {{"operational", "#c0392b", &a.times, &a.density},
                          {"Kijowski", "#2c3e50", &b.times, &b.density}},
                         "t (us)", "normalized arrival density (1/us)");
}

int cmd_compare(const toa::SimulationConfig& cfg, const Options& opt) {
  const toa::CompareOutcome co = toa::run_compare(cfg, opt.frozen);
  const fs::path dir = ensure_out_dir(cfg, opt);
  write_compare_files(dir, co);
  json metrics{{"version", toa::kVersion},
               {"command", "compare"},
               {"params", params_json(cfg, opt)},
               {"results", compare_results(co)}};
  write_metrics(dir, metrics);
  std::ostringstream line;
  line << "compare: L1 " << co.l1 << ", KS " << co.ks << ", mean delay "
       << co.mean_op - co.mean_kij << " us, wrote " << (dir / "overlay.svg").string();
  say(opt, line.str());
  return 0;
}

struct SweepPoint {
  toa::SimulationConfig cfg;
  double omega0_gamma = 0.0;
  double v_cm_s = 0.0;
  std::string dir_name;
};

struct SweepRow {
  bool ok = false;
  std::string message;
  double detected = std::nan("");
  double rejected = std::nan("");
  double mean_time = std::nan("");
  double l1 = std::nan("");
  double ks = std::nan("");
  double mean_delay = std::nan("");
};

int cmd_sweep(const toa::SimulationConfig& cfg, const Options& opt) {
  if (!cfg.sweep.present)
    throw toa::config_error("sweep: config needs a [sweep] section");

  std::vector<double> omegas = cfg.sweep.omega0_gammas;
  if (omegas.empty())
    omegas.push_back(cfg.atom.gamma > 0.0 ? cfg.laser.omega0 / cfg.atom.gamma : 0.0);
  std::vector<double> velocities = cfg.sweep.velocities_cm_s;
  if (velocities.empty())
    velocities.push_back(toa::units::velocity_internal_to_cm_s(cfg.packets[0].v_mean));

  std::vector<SweepPoint> points;
  for (const double og : omegas)
    for (const double v : velocities) {
      SweepPoint pt{cfg, og, v, ""};
      pt.cfg.laser.omega0 = og * cfg.atom.gamma;
      for (auto& p : pt.cfg.packets) p.v_mean = toa::units::velocity_cm_s_to_internal(v);
      std::ostringstream name;
      name << "point_" << std::setw(3) << std::setfill('0') << points.size();
      pt.dir_name = name.str();
      points.push_back(std::move(pt));
    }

  const fs::path dir = ensure_out_dir(cfg, opt);
  std::vector<SweepRow> rows(points.size());
  std::mutex print_mutex;

  const auto run_point = [&](size_t i) {
    const SweepPoint& pt = points[i];
    SweepRow& row = rows[i];
    try {
      const toa::Grid g = pt.cfg.grid.make();
      for (const auto& p : pt.cfg.packets) g.require_resolves(p, pt.cfg.atom.mass);
      const toa::CompareOutcome co = toa::run_compare(pt.cfg, opt.frozen);
      const fs::path sub = dir / pt.dir_name;
      std::error_code ec;
      fs::create_directories(sub, ec);
      if (ec) throw toa::io_error("cannot create " + sub.string() + ": " + ec.message());
      write_compare_files(sub, co);
      json metrics{{"version", toa::kVersion},
                   {"command", "sweep"},
                   {"params", params_json(pt.cfg, opt)},
                   {"results", compare_results(co)}};
      write_metrics(sub, metrics);
      row.ok = true;
      row.detected = co.op.detected;
      row.rejected = co.op.rejected;
      row.mean_time = co.mean_op;
      row.l1 = co.l1;
      row.ks = co.ks;
      row.mean_delay = co.mean_op - co.mean_kij;
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
    std::lock_guard<std::mutex> lock(print_mutex);
    std::ostringstream line;
    line << "sweep " << pt.dir_name << ": omega0 = " << pt.omega0_gamma << " gamma, v = "
         << pt.v_cm_s << " cm/s -> " << (row.ok ? "ok" : ("failed: " + row.message));
    say(opt, line.str());
  };

  const int workers = std::max(1, std::min<int>(opt.threads, static_cast<int>(points.size())));
  if (workers == 1) {
    for (size_t i = 0; i < points.size(); ++i) run_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
          run_point(i);
      });
    for (auto& th : pool) th.join();
  }

  const Eigen::Index np = static_cast<Eigen::Index>(points.size());
  toa::RealArray c_idx(np), c_omega(np), c_v(np), c_ok(np), c_det(np), c_rej(np), c_mean(np),
      c_l1(np), c_ks(np), c_delay(np);
  json manifest = json::array();
  bool any_failed = false;
  for (Eigen::Index i = 0; i < np; ++i) {
    const SweepPoint& pt = points[static_cast<size_t>(i)];
    const SweepRow& row = rows[static_cast<size_t>(i)];
    c_idx[i] = static_cast<double>(i);
    c_omega[i] = pt.omega0_gamma;
    c_v[i] = pt.v_cm_s;
    c_ok[i] = row.ok ? 1.0 : 0.0;
    c_det[i] = row.detected;
    c_rej[i] = row.rejected;
    c_mean[i] = row.mean_time;
    c_l1[i] = row.l1;
    c_ks[i] = row.ks;
    c_delay[i] = row.mean_delay;
    manifest.push_back(json{{"dir", pt.dir_name},
                            {"omega0_gamma", pt.omega0_gamma},
                            {"v_cm_s", pt.v_cm_s},
                            {"status", row.ok ? "ok" : "failed"},
                            {"message", row.message}});
    if (!row.ok) any_failed = true;
  }
  toa::write_csv((dir / "summary.csv").string(),
                 {{"point", &c_idx},
                  {"omega0_gamma", &c_omega},
                  {"v_cm_s", &c_v},
                  {"ok", &c_ok},
                  {"detected", &c_det},
                  {"rejected", &c_rej},
                  {"mean_time_us", &c_mean},
                  {"l1_vs_kijowski", &c_l1},
                  {"ks_vs_kijowski", &c_ks},
                  {"mean_delay_us", &c_delay}});
  toa::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  say(opt, "sweep: wrote " + (dir / "summary.csv").string());
  return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrival-time distributions of laser-probed cold atoms"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", opt.config, "configuration file (INI)")->required();
    sc->add_option("--out", opt.out, "output directory (overrides [output] dir)");
    sc->add_option("--threads", opt.threads, "worker threads for sweeps and trajectory scans")
        ->check(CLI::PositiveNumber);
    sc->add_flag("--frozen-atom", opt.frozen, "disable the kinetic step (test mode)");
    sc->add_flag("--quiet", opt.quiet, "suppress progress output");
    return sc;
  };

  CLI::App* simulate =
      add_common(app.add_subcommand("simulate", "propagate and write N, P2, Pi series"));
  CLI::App* kijowski =
      add_common(app.add_subcommand("kijowski", "ideal reference arrival distribution"));
  CLI::App* montecarlo =
      add_common(app.add_subcommand("montecarlo", "quantum-jump first-photon histogram"));
  CLI::App* compare =
      add_common(app.add_subcommand("compare", "operational vs reference curves and metrics"));
  CLI::App* sweep =
      add_common(app.add_subcommand("sweep", "cross product of omega0 and velocity lists"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const toa::SimulationConfig cfg = toa::parse_config(opt.config);
    if (simulate->parsed()) return cmd_simulate(cfg, opt);
    if (kijowski->parsed()) return cmd_kijowski(cfg, opt);
    if (montecarlo->parsed()) return cmd_montecarlo(cfg, opt);
    if (compare->parsed()) return cmd_compare(cfg, opt);
    if (sweep->parsed()) return cmd_sweep(cfg, opt);
    return 2;
  } catch (const toa::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const toa::numeric_error& e) {
    std::cerr << "numerical-validity error: " << e.what() << "\n";
    return 3;
  } catch (const toa::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
