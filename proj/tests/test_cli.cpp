#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_tool;
std::string g_configs;
fs::path g_work;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_tool(const std::string& args) {
  const fs::path out = g_work / "stdout.txt";
  const fs::path err = g_work / "stderr.txt";
  const std::string cmd =
      "\"" + g_tool + "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = g_work / name;
  std::ofstream(p) << text;
  return p;
}

const std::string kFast = R"(
[species]
name = Cs133

[laser]
shape = step
omega0 = 1.24 gamma
edge_um = 0

[packet]
x0_um = -1.05
v_cm_s = 10
dv_cm_s = 0.098

[grid]
x_min_um = -6
x_max_um = 6
n = 2048

[time]
dt_us = 5e-4
t_max_us = 20
sample_stride = 10

[mc]
n_traj = 2000
seed = 7
bins = 100
)";

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE_MESSAGE(line.find('\r') == std::string::npos, "CR found in CSV");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

bool round_trips_at_17(const std::string& token) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::strtod(token.c_str(), nullptr));
  return token == buf;
}

}  // namespace

TEST_CASE("simulate writes deterministic well-formed output") {
  const fs::path cfg = write_config("fast.ini", kFast);
  const fs::path out_a = g_work / "sim_a";
  const fs::path out_b = g_work / "sim_b";

  const RunResult a = run_tool("simulate --config \"" + cfg.string() + "\" --out \"" +
                               out_a.string() + "\" --quiet");
  CHECK(a.code == 0);
  CHECK(a.out.empty());  // --quiet silences the summary

  const auto rows = read_csv(out_a / "timeseries.csv");
  REQUIRE(rows.size() == 4002);  // header + 40000/10 + 1 samples
  REQUIRE(rows[0].size() == 4);
  CHECK(rows[0][0] == "t_us");
  CHECK(rows[0][1] == "norm");
  CHECK(rows[0][2] == "p2");
  CHECK(rows[0][3] == "pi_op_per_us");
  CHECK(rows[1][0] == "0");
  for (size_t i = 1; i < rows.size(); i += 500)
    for (const auto& tok : rows[i]) CHECK(round_trips_at_17(tok));

  const auto metrics = nlohmann::json::parse(slurp(out_a / "metrics.json"));
  CHECK(metrics["results"]["detected"].get<double>() > 0.5);
  CHECK(metrics["results"]["rejected"].get<double>() > 0.0);
  CHECK(metrics["version"].is_string());

  const RunResult b = run_tool("simulate --config \"" + cfg.string() + "\" --out \"" +
                               out_b.string() + "\" --quiet");
  CHECK(b.code == 0);
  CHECK(slurp(out_a / "timeseries.csv") == slurp(out_b / "timeseries.csv"));
  CHECK(slurp(out_a / "metrics.json") == slurp(out_b / "metrics.json"));
}

TEST_CASE("simulate without --quiet reports to stdout") {
  const fs::path cfg = write_config("fast2.ini", kFast);
  const RunResult r = run_tool("simulate --config \"" + cfg.string() + "\" --out \"" +
                               (g_work / "sim_loud").string() + "\"");
  CHECK(r.code == 0);
  CHECK(!r.out.empty());
}

TEST_CASE("frozen atom flag") {
  const fs::path cfg = write_config("fast3.ini", kFast);
  const RunResult r = run_tool("simulate --frozen-atom --config \"" + cfg.string() +
                               "\" --out \"" + (g_work / "frozen").string() + "\" --quiet");
  CHECK(r.code == 0);
  // the packet cannot move, so only its static tail inside the beam is eaten
  const auto metrics = nlohmann::json::parse(slurp(g_work / "frozen" / "metrics.json"));
  const double detected = metrics["results"]["detected"].get<double>();
  CHECK(detected > 0.0);
  CHECK(detected < 1e-4);
  CHECK(metrics["results"]["rejected"].get<double>() > 0.999);
  CHECK(metrics["params"]["frozen_atom"].get<bool>());
}

TEST_CASE("kijowski subcommand") {
  const fs::path cfg = write_config("fast4.ini", kFast);
  const fs::path out = g_work / "kij";
  const RunResult r =
      run_tool("kijowski --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --quiet");
  CHECK(r.code == 0);
  const auto rows = read_csv(out / "kijowski.csv");
  REQUIRE(rows.size() == 4002);
  CHECK(rows[0][0] == "t_us");
  CHECK(rows[0][1] == "pi_k_per_us");
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["results"]["peak_time_us"].get<double>() == doctest::Approx(10.5).epsilon(0.02));
  CHECK(metrics["results"]["total_mass"].get<double>() > 0.99);
}

TEST_CASE("compare subcommand") {
  const fs::path cfg = write_config("fast5.ini", kFast);
  const fs::path out = g_work / "cmp";
  const RunResult r =
      run_tool("compare --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --quiet");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "timeseries.csv"));
  CHECK(fs::exists(out / "kijowski.csv"));
  const std::string svg = slurp(out / "overlay.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  const double l1 = metrics["results"]["l1_vs_kijowski"].get<double>();
  CHECK(l1 > 0.0);
  CHECK(l1 < 0.5);
  CHECK(std::isfinite(metrics["results"]["mean_delay_us"].get<double>()));
}

TEST_CASE("montecarlo subcommand is thread-count invariant") {
  const fs::path cfg = write_config("fast6.ini", kFast);
  const fs::path out_a = g_work / "mc_a";
  const fs::path out_b = g_work / "mc_b";
  const RunResult a = run_tool("montecarlo --config \"" + cfg.string() + "\" --out \"" +
                               out_a.string() + "\" --quiet");
  CHECK(a.code == 0);
  const RunResult b = run_tool("montecarlo --config \"" + cfg.string() + "\" --out \"" +
                               out_b.string() + "\" --threads 3 --quiet");
  CHECK(b.code == 0);
  CHECK(slurp(out_a / "histogram.csv") == slurp(out_b / "histogram.csv"));

  const auto rows = read_csv(out_a / "histogram.csv");
  REQUIRE(rows.size() == 101);
  CHECK(rows[0][0] == "t_us");
  CHECK(rows[0][1] == "count");
  CHECK(rows[0][2] == "density_per_us");
  CHECK(rows[0][3] == "se_density_per_us");

  const auto metrics = nlohmann::json::parse(slurp(out_a / "metrics.json"));
  CHECK(metrics["results"]["n_traj"].get<long long>() == 2000);
  CHECK(metrics["results"]["ks_vs_deterministic"].get<double>() < 0.1);
  const double sf = metrics["results"]["survived_fraction"].get<double>();
  CHECK(sf > 0.0);
  CHECK(sf < 1.0);
}

TEST_CASE("sweep subcommand") {
  const std::string sweep_cfg = kFast + R"(
[sweep]
omega0_gammas = 0.372, 1.24
)";
  const fs::path cfg = write_config("sweep.ini", sweep_cfg);
  const fs::path out = g_work / "sweep";
  const RunResult r = run_tool("sweep --config \"" + cfg.string() + "\" --out \"" + out.string() +
                               "\" --threads 2 --quiet");
  CHECK(r.code == 0);
  const auto rows = read_csv(out / "summary.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "point");
  CHECK(fs::exists(out / "point_000" / "metrics.json"));
  CHECK(fs::exists(out / "point_001" / "overlay.svg"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  REQUIRE(manifest.is_array());
  REQUIRE(manifest.size() == 2);
  for (const auto& entry : manifest) CHECK(entry["status"].get<std::string>() == "ok");
  // the stronger beam reflects more atoms before they can fluoresce
  const double rej0 = std::strtod(rows[1][5].c_str(), nullptr);
  const double rej1 = std::strtod(rows[2][5].c_str(), nullptr);
  CHECK(rej0 < rej1);
}

TEST_CASE("config errors exit with 2") {
  const RunResult missing = run_tool("simulate --config /nonexistent.ini --quiet");
  CHECK(missing.code == 2);
  CHECK(!missing.err.empty());

  const fs::path bad = write_config("bad.ini", R"(
[species]
name = Cs133
)");
  CHECK(run_tool("simulate --config \"" + bad.string() + "\" --quiet").code == 2);

  const RunResult noargs = run_tool("");
  CHECK(noargs.code == 2);
  const RunResult badsub = run_tool("transmogrify --config x.ini");
  CHECK(badsub.code == 2);
}

TEST_CASE("boundary violation exits with 3") {
  // light fast atom, no decay: the packet runs off the grid
  const fs::path cfg = write_config("leak.ini", R"(
[species]
mass_u = 10
gamma_rad_s = 0

[laser]
omega0 = 0 gamma

[packet]
x0_um = -1
v_cm_s = 40
dv_cm_s = 1

[grid]
x_min_um = -6
x_max_um = 6
n = 2048

[time]
dt_us = 5e-4
t_max_us = 20
)");
  const RunResult r = run_tool("simulate --config \"" + cfg.string() + "\" --quiet");
  CHECK(r.code == 3);
  CHECK(r.err.find("grid") != std::string::npos);
}

TEST_CASE("unwritable output exits with 4") {
  const fs::path blocker = g_work / "blocker";
  std::ofstream(blocker) << "not a directory";
  const fs::path cfg = write_config("fast7.ini", kFast);
  const RunResult r = run_tool("simulate --config \"" + cfg.string() + "\" --out \"" +
                               (blocker / "sub").string() + "\" --quiet");
  CHECK(r.code == 4);
}

TEST_CASE("help is available") {
  const RunResult r = run_tool("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("simulate") != std::string::npos);
  CHECK(r.out.find("kijowski") != std::string::npos);
  CHECK(r.out.find("sweep") != std::string::npos);
}

TEST_CASE("shipped reference config") {
  // the full propagation takes minutes; the reference curve alone is quick
  const fs::path cfg = fs::path(g_configs) / "reference.ini";
  REQUIRE(fs::exists(cfg));
  const fs::path out = g_work / "reference_kij";
  const RunResult r =
      run_tool("kijowski --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --quiet");
  CHECK(r.code == 0);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["results"]["peak_time_us"].get<double>() == doctest::Approx(10.5).epsilon(0.01));
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <toasim-binary> <configs-dir>\n");
    return 1;
  }
  g_tool = argv[1];
  g_configs = argv[2];
  g_work = fs::temp_directory_path() / "toa_cli_tests";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  doctest::Context ctx;
  int one = 1;
  ctx.applyCommandLine(one, argv);
  const int rc = ctx.run();
  fs::remove_all(g_work);
  return rc;
}
