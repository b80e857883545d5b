#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace subplanck;
using namespace subplanck::tools;
using nlohmann::json;

namespace {

struct Globals {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<double> dt;
  std::string snapshots;
};

RunOptions run_options(const Globals& g) {
  RunOptions o;
  o.out_dir = g.out_dir;
  o.seed = g.seed;
  o.dt = g.dt;
  if (!g.snapshots.empty()) o.snapshots = parse_number_list(g.snapshots);
  return o;
}

void apply_threads(const Globals& g) {
  std::size_t n = 1;
  if (g.threads) {
    n = *g.threads;
  } else if (const char* env = std::getenv("SUBPLANCK_THREADS")) {
    try {
      n = static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("SUBPLANCK_THREADS is not a number: '") + env + "'");
    }
  }
  set_thread_count(std::max<std::size_t>(n, 1));
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto v = parse_number_list(text);
  if (v.size() != 2) throw std::invalid_argument(std::string(what) + " needs two comma-separated numbers");
  return {v[0], v[1]};
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space structure, decoherence and chaotic dynamics of quantum states"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();
  app.add_option("--seed", g.seed, "override the scenario seed");
  app.add_option("--threads", g.threads, "worker threads (default: SUBPLANCK_THREADS or 1)");
  app.add_option("--dt", g.dt, "override the time step");
  app.add_option("--snapshots", g.snapshots, "comma-separated snapshot times");

  std::string config, file;
  std::vector<std::string> files;

  auto* state = app.add_subcommand("state", "build the initial state of a scenario and write it as PSIGRID1");
  state->add_option("config", config, "scenario JSON")->required();

  auto* wigner = app.add_subcommand("wigner", "Wigner function of a PSIGRID1 or RHOGRID1 file");
  std::string x_range, p_range;
  bool tile = false;
  wigner->add_option("file", file)->required();
  wigner->add_option("--x-range", x_range, "lo,hi");
  wigner->add_option("--p-range", p_range, "lo,hi");
  wigner->add_flag("--tile", tile, "measure the central checkerboard cell");

  auto* evolve = app.add_subcommand("evolve", "evolve a PSIGRID1 state under the driven pendulum");
  DrivenPendulumParams params = kChaoticPendulum;
  double t0 = 0.0;
  evolve->add_option("file", file)->required();
  evolve->add_option("--mass", params.mass)->capture_default_str();
  evolve->add_option("--kappa", params.kappa)->capture_default_str();
  evolve->add_option("--drive", params.drive_amplitude, "drive amplitude l")->capture_default_str();
  evolve->add_option("--harmonic", params.harmonic, "harmonic confinement a_h")->capture_default_str();
  evolve->add_option("--t0", t0, "initial time")->capture_default_str();

  auto* classical = app.add_subcommand("classical", "classical ensemble and Lyapunov estimate of a scenario");
  classical->add_option("config", config, "scenario JSON with dynamics and classical sections")->required();

  auto* scan = app.add_subcommand("scan", "overlap decay curve <psi|D(s u) psi> as CSV");
  std::string direction;
  double scan_max = 0.0;
  std::size_t steps = 64;
  double threshold = kInvE;
  scan->add_option("file", file)->required();
  scan->add_option("--direction", direction, "dx,dp")->required();
  scan->add_option("--max", scan_max, "largest shift magnitude")->required();
  scan->add_option("--steps", steps)->capture_default_str();
  scan->add_option("--threshold", threshold)->capture_default_str();

  auto* report = app.add_subcommand("report", "structure report of PSIGRID1/RHOGRID1 files");
  std::optional<double> lyapunov, delta_p0;
  report->add_option("files", files)->required();
  report->add_option("--lyapunov", lyapunov, "Lyapunov rate for the saturation times");
  report->add_option("--delta-p0", delta_p0, "initial momentum spread for t_hbar");

  auto* run = app.add_subcommand("run", "run a scenario and write every artifact plus manifest.json");
  run->add_option("config", config, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    apply_threads(g);
    const RunOptions ro = run_options(g);
    if (*state) {
      const auto s = with_overrides(load_scenario(config), ro);
      ArtifactWriter out(ro.out_dir);
      const auto psi = build_state(s);
      out.write("state.psi", io::encode(psi), "PSIGRID1");
      out.write_manifest({{"scenario", s.name}, {"seed", s.seed}});
      print(state_report(psi, {}, false));
    } else if (*wigner) {
      WignerWindow win;
      if (!x_range.empty()) win.x_range = parse_pair(x_range, "--x-range");
      if (!p_range.empty()) win.p_range = parse_pair(p_range, "--p-range");
      const auto bytes = io::read_file(file);
      const auto w = io::magic_of(bytes) == "RHOGRID1" ? wigner_of_rho(io::decode_rho(bytes), win)
                                                       : wigner_of_psi(io::decode_psi(bytes), win);
      ArtifactWriter out(ro.out_dir);
      json j{{"file", out.write(stem(file) + ".wig", io::encode(w), "WIGGRID1")},
             {"n_x", w.n_x()},
             {"n_p", w.n_p()},
             {"integral", w.integral()}};
      if (tile) {
        const auto t = measure_central_tile(w);
        j["tile"] = {{"cell_area", t.cell_area}, {"tile_area", t.tile_area}};
      }
      out.write_manifest({{"command", "wigner"}, {"input", file}});
      print(j);
    } else if (*evolve) {
      if (!ro.snapshots) throw std::invalid_argument("evolve needs --snapshots");
      const auto psi = io::load_psi(file);
      const auto times = *ro.snapshots;
      const double t_end = *std::max_element(times.begin(), times.end());
      const auto snaps = evolve_quantum(psi, params, ro.dt.value_or(kDefaultDt), t_end, times, t0);
      ArtifactWriter out(ro.out_dir);
      json j = json::array();
      for (const auto& s : snaps) {
        j.push_back({{"t", s.t},
                     {"file", out.write(stem(file) + "_" + time_label(s.t) + ".psi", io::encode(s.psi), "PSIGRID1")}});
      }
      out.write_manifest({{"command", "evolve"}, {"input", file}});
      print(j);
    } else if (*classical) {
      print(run_classical(load_scenario(config), ro));
    } else if (*scan) {
      const auto [dx, dp] = parse_pair(direction, "--direction");
      const auto bytes = io::read_file(file);
      const auto curve = io::magic_of(bytes) == "RHOGRID1"
                             ? decay_scan(io::decode_rho(bytes), {dx, dp}, scan_max, steps)
                             : decay_scan(io::decode_psi(bytes), {dx, dp}, scan_max, steps);
      const auto cross = first_crossing(curve, threshold);
      ArtifactWriter out(ro.out_dir);
      json j{{"file", out.write_text(stem(file) + "_scan.csv", io::overlap_csv(curve), "CSV")},
             {"crossing", cross ? json(*cross) : json(nullptr)}};
      out.write_manifest({{"command", "scan"}, {"input", file}});
      print(j);
    } else if (*report) {
      json all = json::array();
      for (const auto& f : files) {
        const auto bytes = io::read_file(f);
        StructureOptions opts;
        opts.lyapunov = lyapunov;
        json r;
        if (io::magic_of(bytes) == "RHOGRID1") {
          const auto rho = io::decode_rho(bytes);
          opts.delta_p0 = delta_p0 ? delta_p0 : std::optional(momentum_moments(rho).stddev());
          r = state_report(rho, opts);
        } else {
          const auto psi = io::decode_psi(bytes);
          opts.delta_p0 = delta_p0 ? delta_p0 : std::optional(momentum_moments(psi).stddev());
          r = state_report(psi, opts, true);
        }
        r["file"] = f;
        all.push_back(std::move(r));
      }
      ArtifactWriter out(ro.out_dir);
      out.write_text("report.json", json{{"reports", all}}.dump(2) + "\n", "JSON");
      out.write_manifest({{"command", "report"}});
      print(all);
    } else if (*run) {
      const auto rep = run_scenario(load_scenario(config), ro);
      std::cout << "wrote " << rep["states"].size() << " state reports to "
                << (std::filesystem::path(ro.out_dir) / "report.json").string() << "\n";
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return kNumeric;
  } catch (const FormatError& e) {
    std::cerr << "bad input file: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
