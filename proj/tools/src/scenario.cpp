#include "scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include "json_lines.hpp"

namespace subplanck::tools {

using nlohmann::json;

SchemaError::SchemaError(const std::string& source, int line, const std::string& pointer, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + (pointer.empty() ? "/" : pointer) + ": " +
                         message),
      line_(line),
      pointer_(pointer) {}

namespace {

class Schema {
 public:
  Schema(std::string source, std::map<std::string, int> lines) : source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw SchemaError(source_, line_of(lines_, ptr), ptr, msg);
  }

  void object(const json& v, const std::string& ptr) const {
    if (!v.is_object()) fail(ptr, "expected an object");
  }

  void only(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    object(obj, ptr);
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        fail(ptr + "/" + pointer_token(key), "unknown key '" + key + "' (allowed: " + list + ")");
      }
    }
  }

  const json* find(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json& require(const json& obj, const std::string& ptr, const char* key) const {
    const json* v = find(obj, key);
    if (!v) fail(ptr, std::string("missing required key '") + key + "'");
    return *v;
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr, "expected a finite number");
    return d;
  }

  double number(const json& obj, const std::string& ptr, const char* key) const {
    return number(require(obj, ptr, key), ptr + "/" + key);
  }

  double number_or(const json& obj, const std::string& ptr, const char* key, double fallback) const {
    const json* v = find(obj, key);
    return v ? number(*v, ptr + "/" + key) : fallback;
  }

  double positive(const json& obj, const std::string& ptr, const char* key) const {
    const double v = number(obj, ptr, key);
    if (!(v > 0.0)) fail(ptr + "/" + key, "must be positive");
    return v;
  }

  std::uint64_t count(const json& v, const std::string& ptr) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(ptr, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const json& v, const std::string& ptr) const {
    if (!v.is_boolean()) fail(ptr, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  std::pair<double, double> range(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.size() != 2) fail(ptr, "expected [low, high]");
    const double lo = number(v[0], ptr + "/0");
    const double hi = number(v[1], ptr + "/1");
    if (!(lo < hi)) fail(ptr, "low must be below high");
    return {lo, hi};
  }

  std::vector<double> numbers(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ptr, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ptr + "/" + std::to_string(i)));
    return out;
  }

 private:
  std::string source_;
  std::map<std::string, int> lines_;
};

GridConfig parse_grid(const Schema& s, const json& g) {
  const std::string ptr = "/grid";
  s.only(g, ptr, {"n", "dx", "extent", "hbar"});
  GridConfig out;
  out.n = s.count(s.require(g, ptr, "n"), ptr + "/n");
  out.hbar = s.positive(g, ptr, "hbar");
  const bool has_dx = g.contains("dx");
  const bool has_extent = g.contains("extent");
  if (has_dx == has_extent) s.fail(ptr, "give exactly one of 'dx' and 'extent'");
  out.dx = has_dx ? s.positive(g, ptr, "dx") : s.positive(g, ptr, "extent") / static_cast<double>(out.n);
  try {
    GridSpec::centered(out.n, out.dx, out.hbar);
  } catch (const Error& e) {
    s.fail(ptr, e.what());
  }
  return out;
}

StateSource parse_state(const Schema& s, const json& st, const std::filesystem::path& base) {
  const std::string ptr = "/state";
  s.only(st, ptr, {"gaussian", "cat", "compass", "sparse", "file"});
  if (st.size() != 1) {
    s.fail(ptr, "state needs exactly one of gaussian, cat, compass, sparse, file (found " + std::to_string(st.size()) +
                    ")");
  }
  const auto& [kind, v] = *st.items().begin();
  const std::string p = ptr + "/" + kind;
  if (kind == "gaussian") {
    s.only(v, p, {"x0", "p0", "xi"});
    return GaussianPacket{s.number_or(v, p, "x0", 0.0), s.number_or(v, p, "p0", 0.0), s.positive(v, p, "xi")};
  }
  if (kind == "cat") {
    s.only(v, p, {"x0", "xi"});
    return CatState{s.number(v, p, "x0"), s.positive(v, p, "xi")};
  }
  if (kind == "compass") {
    s.only(v, p, {"L", "P", "xi"});
    return CompassSpec{s.positive(v, p, "L"), s.positive(v, p, "P"), s.positive(v, p, "xi")};
  }
  if (kind == "sparse") {
    s.object(v, p);
    if (v.contains("packets")) {
      s.only(v, p, {"xi", "packets"});
      SparseSpec spec;
      spec.xi = s.positive(v, p, "xi");
      const json& list = v["packets"];
      if (!list.is_array() || list.empty()) s.fail(p + "/packets", "expected a non-empty array of packets");
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string q = p + "/packets/" + std::to_string(k);
        s.only(list[k], q, {"x", "p", "re", "im"});
        const cplx alpha{s.number_or(list[k], q, "re", 1.0), s.number_or(list[k], q, "im", 0.0)};
        if (alpha == cplx{}) s.fail(q, "packet amplitude is zero");
        spec.packets.push_back({alpha, s.number(list[k], q, "x"), s.number_or(list[k], q, "p", 0.0)});
      }
      return spec;
    }
    s.only(v, p, {"count", "xi", "x_range", "p_range", "min_separation"});
    RandomSparseState r;
    r.count = s.count(s.require(v, p, "count"), p + "/count");
    if (r.count == 0) s.fail(p + "/count", "must be at least 1");
    r.xi = s.positive(v, p, "xi");
    std::tie(r.x_lo, r.x_hi) = s.range(s.require(v, p, "x_range"), p + "/x_range");
    std::tie(r.p_lo, r.p_hi) = s.range(s.require(v, p, "p_range"), p + "/p_range");
    r.min_separation = s.number_or(v, p, "min_separation", 5.5);
    if (!(r.min_separation >= 0.0)) s.fail(p + "/min_separation", "must be non-negative");
    return r;
  }
  // file
  FileState f{s.string(v, p)};
  if (f.path.is_relative()) f.path = base / f.path;
  if (!std::filesystem::exists(f.path)) s.fail(p, "file '" + f.path.string() + "' does not exist");
  return f;
}

DynamicsConfig parse_dynamics(const Schema& s, const json& d) {
  const std::string ptr = "/dynamics";
  s.only(d, ptr, {"params", "dt", "snapshots"});
  DynamicsConfig out;
  if (const json* prm = s.find(d, "params")) {
    const std::string p = ptr + "/params";
    s.only(*prm, p, {"mass", "kappa", "drive_amplitude", "harmonic"});
    out.params.mass = s.number_or(*prm, p, "mass", out.params.mass);
    out.params.kappa = s.number_or(*prm, p, "kappa", out.params.kappa);
    out.params.drive_amplitude = s.number_or(*prm, p, "drive_amplitude", out.params.drive_amplitude);
    out.params.harmonic = s.number_or(*prm, p, "harmonic", out.params.harmonic);
    try {
      out.params.validate();
    } catch (const Error& e) {
      s.fail(p, e.what());
    }
  }
  out.dt = s.number_or(d, ptr, "dt", out.dt);
  if (!(out.dt > 0.0)) s.fail(ptr + "/dt", "must be positive");
  out.snapshots = s.numbers(s.require(d, ptr, "snapshots"), ptr + "/snapshots");
  if (out.snapshots.empty()) s.fail(ptr + "/snapshots", "needs at least one time");
  for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
    if (out.snapshots[i] < 0.0) s.fail(ptr + "/snapshots/" + std::to_string(i), "snapshot times start at 0");
  }
  return out;
}

WignerConfig parse_wigner(const Schema& s, const json& w) {
  const std::string ptr = "/wigner";
  s.only(w, ptr, {"x_range", "p_range", "tile"});
  WignerConfig out;
  if (const json* r = s.find(w, "x_range")) out.window.x_range = s.range(*r, ptr + "/x_range");
  if (const json* r = s.find(w, "p_range")) out.window.p_range = s.range(*r, ptr + "/p_range");
  if (const json* t = s.find(w, "tile")) out.tile = s.boolean(*t, ptr + "/tile");
  return out;
}

ScanConfig parse_scan(const Schema& s, const json& sc) {
  const std::string ptr = "/scan";
  s.only(sc, ptr, {"direction", "max", "steps", "threshold"});
  ScanConfig out;
  const auto dir = s.numbers(s.require(sc, ptr, "direction"), ptr + "/direction");
  if (dir.size() != 2 || (dir[0] == 0.0 && dir[1] == 0.0)) s.fail(ptr + "/direction", "expected nonzero [dx, dp]");
  out.direction = {dir[0], dir[1]};
  out.max = s.positive(sc, ptr, "max");
  if (const json* st = s.find(sc, "steps")) out.steps = s.count(*st, ptr + "/steps");
  if (out.steps < 16) s.fail(ptr + "/steps", "needs at least 16 steps");
  out.threshold = s.number_or(sc, ptr, "threshold", out.threshold);
  if (!(out.threshold > 0.0 && out.threshold < 1.0)) s.fail(ptr + "/threshold", "must lie in (0, 1)");
  return out;
}

ClassicalConfig parse_classical(const Schema& s, const json& c) {
  const std::string ptr = "/classical";
  s.only(c, ptr, {"count", "lyapunov_seeds", "lyapunov_time"});
  ClassicalConfig out;
  if (const json* v = s.find(c, "count")) out.count = s.count(*v, ptr + "/count");
  if (out.count < 2) s.fail(ptr + "/count", "needs at least 2 particles");
  if (const json* v = s.find(c, "lyapunov_seeds")) out.lyapunov_seeds = s.count(*v, ptr + "/lyapunov_seeds");
  out.lyapunov_time = s.number_or(c, ptr, "lyapunov_time", out.lyapunov_time);
  if (!(out.lyapunov_time > 0.0)) s.fail(ptr + "/lyapunov_time", "must be positive");
  return out;
}

ReportConfig parse_report(const Schema& s, const json& r) {
  const std::string ptr = "/report";
  s.only(r, ptr, {"coherence", "lyapunov", "delta_p0"});
  ReportConfig out;
  if (const json* v = s.find(r, "coherence")) out.coherence = s.boolean(*v, ptr + "/coherence");
  if (const json* v = s.find(r, "lyapunov")) {
    out.lyapunov = s.number(*v, ptr + "/lyapunov");
    if (!(*out.lyapunov > 0.0)) s.fail(ptr + "/lyapunov", "must be positive");
  }
  if (const json* v = s.find(r, "delta_p0")) {
    out.delta_p0 = s.number(*v, ptr + "/delta_p0");
    if (!(*out.delta_p0 > 0.0)) s.fail(ptr + "/delta_p0", "must be positive");
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source_name, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line.
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i + 1 < end; ++i) line += text[i] == '\n';
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    throw SchemaError(source_name, line, "", cut == std::string::npos ? msg : msg.substr(cut));
  }
  const Schema s(source_name, json_pointer_lines(text));
  s.only(doc, "", {"name", "seed", "grid", "state", "dynamics", "wigner", "scan", "classical", "report"});
  Scenario out;
  out.base_dir = base_dir;
  out.name = s.string(s.require(doc, "", "name"), "/name");
  if (out.name.empty()) s.fail("/name", "must not be empty");
  if (const json* v = s.find(doc, "seed")) out.seed = s.count(*v, "/seed");
  out.state = parse_state(s, s.require(doc, "", "state"), base_dir);
  const bool from_file = std::holds_alternative<FileState>(out.state);
  if (const json* g = s.find(doc, "grid")) {
    if (from_file) s.fail("/grid", "a file state carries its own grid; remove 'grid'");
    out.grid = parse_grid(s, *g);
  } else if (!from_file) {
    s.fail("", "missing required key 'grid'");
  }
  if (const json* v = s.find(doc, "dynamics")) out.dynamics = parse_dynamics(s, *v);
  if (const json* v = s.find(doc, "wigner")) out.wigner = parse_wigner(s, *v);
  if (const json* v = s.find(doc, "scan")) out.scan = parse_scan(s, *v);
  if (const json* v = s.find(doc, "classical")) {
    if (!out.dynamics) s.fail("/classical", "classical evolution needs a 'dynamics' section");
    out.classical = parse_classical(s, *v);
  }
  if (const json* v = s.find(doc, "report")) out.report = parse_report(s, *v);
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string(), path.parent_path());
}

WaveFunction build_state(const Scenario& s) {
  if (const auto* f = std::get_if<FileState>(&s.state)) return io::load_psi(f->path);
  const GridSpec g = GridSpec::centered(s.grid->n, s.grid->dx, s.grid->hbar);
  return std::visit(
      [&](const auto& st) -> WaveFunction {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, GaussianPacket>) {
          return make_gaussian(st, g);
        } else if constexpr (std::is_same_v<T, CatState>) {
          return make_cat(st.x0, st.xi, g);
        } else if constexpr (std::is_same_v<T, CompassSpec>) {
          return make_compass(st, g);
        } else if constexpr (std::is_same_v<T, RandomSparseState>) {
          return make_sparse(random_sparse_spec(st.count, st.xi, g.hbar(), st.x_lo, st.x_hi, st.p_lo, st.p_hi, s.seed,
                                                st.min_separation),
                             g);
        } else if constexpr (std::is_same_v<T, SparseSpec>) {
          return make_sparse(st, g);
        } else {
          throw std::logic_error("unreachable");
        }
      },
      s.state);
}

}  // namespace subplanck::tools
