#include "runner.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace subplanck::tools {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json structure_json(const StructureReport& r) {
  return {{"L", r.L},
          {"P", r.P},
          {"A", r.A},
          {"a_sub", r.a_sub},
          {"n_states", r.n_states},
          {"delta_x_min", r.delta_x_min},
          {"delta_p_min", r.delta_p_min},
          {"tile_area", r.tile_area},
          {"t_hbar", optional_number(r.t_hbar)},
          {"t_r", optional_number(r.t_r)}};
}

std::optional<double> try_coherence(const WaveFunction& psi, Displacement dir) {
  try {
    return coherence_scale(psi, dir).scale;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::string csv_points(const std::vector<PhasePoint>& pts) {
  std::string out = "x,p\n";
  for (const auto& q : pts) out += io::format_double(q.x) + "," + io::format_double(q.p) + "\n";
  return out;
}

std::vector<double> sorted_times(std::vector<double> t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

struct ClassicalResult {
  json report;
  std::optional<double> lyapunov;
};

ClassicalResult classical_part(const Scenario& s, const WaveFunction& psi0, ArtifactWriter& out) {
  const auto mx = position_moments(psi0);
  const auto mp = momentum_moments(psi0);
  const auto& cfg = *s.classical;
  const auto& dyn = *s.dynamics;
  auto ens = ClassicalEnsemble::gaussian({mx.mean, mp.mean}, mx.stddev(), mp.stddev(), cfg.count, s.seed);
  ClassicalResult res;
  json snaps = json::array();
  for (double t : sorted_times(dyn.snapshots)) {
    ens = evolve_classical(ens, dyn.params, dyn.dt, t);
    const auto fs = filament_scale(ens, mp.stddev());
    double sx = 0.0, sp = 0.0;
    for (const auto& q : ens.particles) {
      sx += q.x;
      sp += q.p;
    }
    const double n = static_cast<double>(ens.particles.size());
    const std::string file =
        out.write_text("classical_" + time_label(t) + ".csv", csv_points(ens.particles), "CSV");
    snaps.push_back({{"t", t},
                     {"file", file},
                     {"mean_x", sx / n},
                     {"mean_p", sp / n},
                     {"filament_p10", fs.p10},
                     {"filament_median", fs.median}});
  }
  res.report = {{"count", cfg.count}, {"patch_sigma_x", mx.stddev()}, {"patch_sigma_p", mp.stddev()},
                {"snapshots", snaps}};
  if (cfg.lyapunov_seeds > 0) {
    const auto start =
        ClassicalEnsemble::gaussian({mx.mean, mp.mean}, mx.stddev(), mp.stddev(), cfg.lyapunov_seeds, s.seed + 1);
    const auto sum = lyapunov_over_seeds(dyn.params, start.particles, cfg.lyapunov_time, 2.0 * kPi);
    res.report["lyapunov"] = {{"mean", sum.mean},
                              {"std_error", sum.std_error},
                              {"chaotic_seeds", sum.chaotic_seeds},
                              {"seeds", cfg.lyapunov_seeds},
                              {"t_total", cfg.lyapunov_time}};
    if (sum.chaotic_seeds > 0) res.lyapunov = sum.mean;
  }
  return res;
}

}  // namespace

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

std::string ArtifactWriter::write(const std::string& name, std::span<const std::uint8_t> bytes,
                                  const std::string& kind) {
  io::write_file(dir_ / name, bytes);
  files_.push_back({{"path", name}, {"kind", kind}, {"bytes", bytes.size()}, {"fnv1a64", hex64(io::fnv1a64(bytes))}});
  return name;
}

std::string ArtifactWriter::write_text(const std::string& name, const std::string& text, const std::string& kind) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
  return write(name, std::span<const std::uint8_t>(p, text.size()), kind);
}

void ArtifactWriter::write_manifest(json header) const {
  header["files"] = files_;
  const std::string text = header.dump(2) + "\n";
  const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
  io::write_file(dir_ / "manifest.json", std::span<const std::uint8_t>(p, text.size()));
}

json state_report(const WaveFunction& psi, const StructureOptions& opts, bool coherence) {
  const auto rep = structure_report(psi, opts);
  json r;
  r["moments"] = {{"mean_x", position_moments(psi).mean}, {"mean_p", momentum_moments(psi).mean}};
  r["structure"] = structure_json(rep);
  if (coherence) {
    const auto cx = try_coherence(psi, {1.0, 0.0});
    const auto cp = try_coherence(psi, {0.0, 1.0});
    r["coherence"] = {{"x", optional_number(cx)},
                      {"p", optional_number(cp)},
                      {"product", cx && cp ? json(*cx * *cp) : json(nullptr)},
                      {"a_sub_over_product", cx && cp ? json(rep.a_sub / (*cx * *cp)) : json(nullptr)}};
  }
  r["orthogonality_shift"] = {{"delta_x", rep.delta_x_min}, {"delta_p", orthogonality_shift(psi)}};
  return r;
}

json state_report(const DensityMatrix& rho, const StructureOptions& opts) {
  const auto rep = structure_report(rho, opts);
  json r;
  r["moments"] = {{"mean_x", position_moments(rho).mean}, {"mean_p", momentum_moments(rho).mean}};
  r["structure"] = structure_json(rep);
  r["purity"] = rho.purity();
  r["orthogonality_shift"] = {{"delta_x", rep.delta_x_min}, {"delta_p", orthogonality_shift(rho)}};
  return r;
}

std::string time_label(double t) { return "t" + io::format_double(t); }

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

Scenario with_overrides(Scenario s, const RunOptions& opts) {
  if (opts.seed) s.seed = *opts.seed;
  if (opts.dt || opts.snapshots) {
    if (!s.dynamics) s.dynamics = DynamicsConfig{};
    if (opts.dt) s.dynamics->dt = *opts.dt;
    if (opts.snapshots) s.dynamics->snapshots = *opts.snapshots;
    if (s.dynamics->snapshots.empty()) throw DomainError("--dt given but the scenario has no snapshot times");
  }
  return s;
}

json run_scenario(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = with_overrides(scenario, opts);
  ArtifactWriter out(opts.out_dir);
  const WaveFunction psi0 = build_state(s);
  const GridSpec& g = psi0.grid();

  json report;
  report["scenario"] = s.name;
  report["seed"] = s.seed;
  report["grid"] = {{"n", g.n()}, {"dx", g.dx()}, {"hbar", g.hbar()}, {"x_min", g.x_min()}};

  std::optional<double> measured_lyapunov;
  if (s.classical) {
    auto c = classical_part(s, psi0, out);
    report["classical"] = std::move(c.report);
    measured_lyapunov = c.lyapunov;
  }

  StructureOptions sopts;
  sopts.lyapunov = s.report.lyapunov ? s.report.lyapunov : measured_lyapunov;
  sopts.delta_p0 = s.report.delta_p0 ? *s.report.delta_p0 : momentum_moments(psi0).stddev();
  if (sopts.lyapunov) {
    report["timescale_inputs"] = {{"lyapunov", *sopts.lyapunov},
                                  {"lyapunov_source", s.report.lyapunov ? "config" : "classical"},
                                  {"delta_p0", *sopts.delta_p0},
                                  {"chi", sopts.chi}};
  }

  std::vector<Snapshot> states{{0.0, psi0}};
  if (s.dynamics) {
    const auto times = sorted_times(s.dynamics->snapshots);
    auto snaps = evolve_quantum(psi0, s.dynamics->params, s.dynamics->dt, times.back(), times);
    for (auto& snap : snaps) {
      if (snap.t != 0.0) states.push_back(std::move(snap));
    }
  }

  const auto* compass = std::get_if<CompassSpec>(&s.state);
  json entries = json::array();
  for (const auto& st : states) {
    const std::string label = st.t == 0.0 ? "initial" : time_label(st.t);
    json e = state_report(st.psi, sopts, s.report.coherence);
    e["label"] = label;
    e["t"] = st.t;
    e["file"] = out.write(label + ".psi", io::encode(st.psi), "PSIGRID1");
    if (compass && st.t == 0.0) {
      json cz;
      cz["expected"] = {{"delta_x", 2 * kPi * g.hbar() / compass->P}, {"delta_p", 2 * kPi * g.hbar() / compass->L}};
      const auto mx = first_overlap_minimum(st.psi, {1.0, 0.0}, 6 * kPi * g.hbar() / compass->P);
      const auto mp = first_overlap_minimum(st.psi, {0.0, 1.0}, 6 * kPi * g.hbar() / compass->L);
      cz["measured"] = {{"delta_x", mx ? json(mx->shift) : json(nullptr)},
                        {"delta_p", mp ? json(mp->shift) : json(nullptr)},
                        {"overlap_x", mx ? json(mx->overlap) : json(nullptr)},
                        {"overlap_p", mp ? json(mp->overlap) : json(nullptr)}};
      e["compass_orthogonality"] = cz;
    }
    if (s.wigner) {
      const auto w = wigner_of_psi(st.psi, s.wigner->window);
      const auto [lo, hi] = std::minmax_element(w.values().begin(), w.values().end());
      json wj{{"file", out.write(label + ".wig", io::encode(w), "WIGGRID1")},
              {"n_x", w.n_x()},
              {"n_p", w.n_p()},
              {"min", *lo},
              {"max", *hi},
              {"integral", w.integral()}};
      if (s.wigner->tile) {
        const double expected = compass ? std::pow(2 * kPi * g.hbar(), 2) / (compass->L * compass->P)
                                        : e["structure"]["tile_area"].get<double>();
        try {
          const auto tile = measure_central_tile(w);
          wj["tile"] = {{"cell_area", tile.cell_area},
                        {"tile_area", tile.tile_area},
                        {"expected", expected},
                        {"ratio", tile.tile_area / expected}};
        } catch (const DomainError& err) {
          wj["tile"] = {{"error", err.what()}, {"expected", expected}};
        }
      }
      e["wigner"] = wj;
    }
    if (s.scan) {
      const auto curve = decay_scan(st.psi, s.scan->direction, s.scan->max, s.scan->steps);
      const auto cross = first_crossing(curve, s.scan->threshold);
      e["scan"] = {{"file", out.write_text(label + "_scan.csv", io::overlap_csv(curve), "CSV")},
                   {"threshold", s.scan->threshold},
                   {"crossing", optional_number(cross)}};
    }
    entries.push_back(std::move(e));
  }
  report["states"] = std::move(entries);

  out.write_text("report.json", report.dump(2) + "\n", "JSON");
  out.write_manifest({{"scenario", s.name}, {"seed", s.seed}});
  return report;
}

json run_classical(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = with_overrides(scenario, opts);
  if (!s.classical || !s.dynamics) throw DomainError("scenario has no 'classical' and 'dynamics' sections");
  ArtifactWriter out(opts.out_dir);
  auto c = classical_part(s, build_state(s), out);
  out.write_text("classical.json", c.report.dump(2) + "\n", "JSON");
  out.write_manifest({{"scenario", s.name}, {"seed", s.seed}});
  return c.report;
}

}  // namespace subplanck::tools
