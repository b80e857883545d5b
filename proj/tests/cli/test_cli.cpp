#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_lines.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace subplanck;
using namespace subplanck::tools;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("subplanck_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int schema_line(const std::string& text) {
  try {
    parse_scenario(text, "cfg.json");
  } catch (const SchemaError& e) {
    return e.line();
  }
  return -1;
}

int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string(SUBPLANCK_CLI) + " " + args + " > /dev/null 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall = R"({
  "name": "small",
  "seed": 5,
  "grid": {"n": 256, "dx": 0.08, "hbar": 0.16},
  "state": {"cat": {"x0": 2.0, "xi": 0.4}},
  "dynamics": {"snapshots": [0.5, 1.0], "dt": 0.01},
  "wigner": {},
  "scan": {"direction": [0, 1], "max": 1.0, "steps": 32},
  "classical": {"count": 50, "lyapunov_seeds": 4, "lyapunov_time": 20}
})";

}  // namespace

TEST(JsonLines, PointersMapToLines) {
  const std::string text = "{\n  \"a\": 1,\n  \"b\": {\n    \"c\": [\n      3,\n      {\"d\": 4}\n    ]\n  }\n}\n";
  const auto lines = json_pointer_lines(text);
  EXPECT_EQ(lines.at("/a"), 2);
  EXPECT_EQ(lines.at("/b"), 3);
  EXPECT_EQ(lines.at("/b/c"), 4);
  EXPECT_EQ(lines.at("/b/c/0"), 5);
  EXPECT_EQ(lines.at("/b/c/1"), 6);
  EXPECT_EQ(lines.at("/b/c/1/d"), 6);
  EXPECT_EQ(line_of(lines, "/b/c/1/zzz"), 6);
  EXPECT_EQ(pointer_token("a/b~c"), "a~1b~0c");
}

TEST(Schema, BundledScenariosParse) {
  for (const char* name : {"fig1_chaotic", "fig2_compass", "fig3_sparse"}) {
    const auto s = load_scenario(fs::path(SUBPLANCK_SCENARIO_DIR) / (std::string(name) + ".json"));
    EXPECT_EQ(s.name, name);
  }
  const auto fig1 = load_scenario(fs::path(SUBPLANCK_SCENARIO_DIR) / "fig1_chaotic.json");
  ASSERT_TRUE(fig1.dynamics.has_value());
  EXPECT_EQ(fig1.dynamics->snapshots, (std::vector<double>{5, 10, 20, 30}));
  EXPECT_EQ(fig1.dynamics->params.kappa, 0.36);
}

TEST(Schema, UnknownKeyIsReportedOnItsLine) {
  const std::string text = "{\n  \"name\": \"x\",\n  \"grid\": {\"n\": 64, \"dx\": 0.1, \"hbar\": 0.16},\n"
                           "  \"state\": {\"gaussian\": {\"xi\": 0.4,\n     \"sigma\": 2}}\n}\n";
  EXPECT_EQ(schema_line(text), 5);
  try {
    parse_scenario(text, "cfg.json");
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/state/gaussian/sigma");
    EXPECT_NE(std::string(e.what()).find("cfg.json:5:"), std::string::npos);
  }
  EXPECT_EQ(schema_line("{\"name\": \"x\",\n\"colour\": 1}"), 2);
}

TEST(Schema, StateNeedsExactlyOneSource) {
  const std::string base = "{\n\"name\": \"x\",\n\"grid\": {\"n\": 64, \"dx\": 0.1, \"hbar\": 0.16},\n";
  EXPECT_EQ(schema_line(base + "\"state\": {}\n}"), 4);
  EXPECT_EQ(schema_line(base + "\"state\": {\"cat\": {\"x0\": 1, \"xi\": 0.4},\n \"compass\": {}}\n}"), 4);
  EXPECT_EQ(schema_line(base + "\"dynamics\": {\"snapshots\": [1]}\n}"), 1);  // missing state
}

TEST(Schema, TypeAndRangeErrors) {
  const std::string head = "{\n\"name\": \"x\",\n\"state\": {\"gaussian\": {\"xi\": 0.4}},\n";
  EXPECT_EQ(schema_line(head + "\"grid\": {\"n\": 100, \"dx\": 0.1, \"hbar\": 0.16}\n}"), 4);
  EXPECT_EQ(schema_line(head + "\"grid\": {\"n\": 64,\n \"dx\": \"wide\", \"hbar\": 0.16}\n}"), 5);
  EXPECT_EQ(schema_line(head + "\"grid\": {\"n\": 64, \"dx\": 0.1, \"extent\": 6.4, \"hbar\": 0.16}\n}"), 4);
  const std::string grid = "\"grid\": {\"n\": 64, \"dx\": 0.1, \"hbar\": 0.16},\n";
  EXPECT_EQ(schema_line(head + grid + "\"dynamics\": {\"snapshots\": [\n1,\n-2]}\n}"), 7);
  EXPECT_EQ(schema_line(head + grid + "\"scan\": {\"direction\": [0, 0], \"max\": 1}\n}"), 5);
  EXPECT_EQ(schema_line(head + grid + "\"classical\": {}\n}"), 5);
  EXPECT_EQ(schema_line(head + grid + "\"state2\": 1\n}"), 5);
}

TEST(Schema, SyntaxErrorLine) {
  EXPECT_EQ(schema_line("{\n\"name\": \"x\",\n\"grid\": {\n}}}\n"), 4);
}

TEST(Schema, FileStateMustExistAndCarriesGrid) {
  const auto dir = scratch("filestate");
  const auto psi = make_gaussian({0, 0, 0.4}, GridSpec::centered(64, 0.1, 0.16));
  io::write_file(dir / "in.psi", io::encode(psi));
  const auto s = parse_scenario(R"({"name": "f", "state": {"file": "in.psi"}})", "cfg.json", dir);
  EXPECT_EQ(io::encode(build_state(s)), io::encode(psi));
  EXPECT_EQ(schema_line(R"({"name": "f", "state": {"file": "missing.psi"}})"), 1);
  EXPECT_THROW(parse_scenario(R"({"name": "f", "grid": {"n": 64, "dx": 0.1, "hbar": 0.16},
                                   "state": {"file": "in.psi"}})",
                              "cfg.json", dir),
               SchemaError);
}

TEST(Run, DeterministicAndRoundTrips) {
  const auto s = parse_scenario(kSmall, "small.json");
  const auto a = scratch("run_a");
  const auto b = scratch("run_b");
  RunOptions oa, ob;
  oa.out_dir = a;
  ob.out_dir = b;
  const auto report = run_scenario(s, oa);
  run_scenario(s, ob);
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_EQ(report["states"].size(), 3u);
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  std::size_t binaries = 0;
  for (const auto& f : manifest["files"]) {
    const auto bytes = io::read_file(a / f["path"].get<std::string>());
    EXPECT_EQ(f["bytes"].get<std::size_t>(), bytes.size());
    const auto kind = f["kind"].get<std::string>();
    if (kind == "PSIGRID1") {
      EXPECT_EQ(io::encode(io::decode_psi(bytes)), bytes);
      ++binaries;
    } else if (kind == "WIGGRID1") {
      EXPECT_EQ(io::encode(io::decode_wigner(bytes)), bytes);
      ++binaries;
    }
  }
  EXPECT_EQ(binaries, 6u);
  EXPECT_TRUE(fs::exists(a / "classical_t0.5.csv"));
  // A different seed changes the classical ensemble and hence the manifest.
  RunOptions oc = oa;
  oc.out_dir = scratch("run_c");
  oc.seed = 6;
  run_scenario(s, oc);
  EXPECT_NE(slurp(a / "manifest.json"), slurp(oc.out_dir / "manifest.json"));
}

TEST(Run, ReportedNumbersRoundTrip) {
  const auto dir = scratch("roundtrip");
  RunOptions o;
  o.out_dir = dir;
  const auto report = run_scenario(parse_scenario(kSmall, "small.json"), o);
  const auto back = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(back, report);
  EXPECT_EQ(back["states"][0]["structure"]["A"].get<double>(), report["states"][0]["structure"]["A"].get<double>());
}

TEST(Run, CompassReportValues) {
  const auto dir = scratch("compass");
  RunOptions o;
  o.out_dir = dir;
  const auto s = parse_scenario(R"({"name": "c", "grid": {"n": 2048, "dx": 0.02, "hbar": 0.16},
                                    "state": {"compass": {"L": 8, "P": 8, "xi": 0.4}}})",
                                "c.json");
  const auto r = run_scenario(s, o);
  const auto& st = r["states"][0];
  // Geometric separation L = 8 gives hbar/L = 0.02; the moment spread is smaller.
  EXPECT_NEAR(st["compass_orthogonality"]["expected"]["delta_p"].get<double>(), 2 * kPi * 0.16 / 8, 1e-15);
  EXPECT_NEAR(structure_from_extent(8, 8, 0.16).delta_p_min, 0.02, 1e-15);
  EXPECT_NEAR(st["structure"]["n_states"].get<double>(),
              st["structure"]["A"].get<double>() / (2 * kPi * 0.16), 1e-12);
}

TEST(Run, SnapshotOverride) {
  auto s = parse_scenario(kSmall, "small.json");
  RunOptions o;
  o.snapshots = std::vector<double>{0.25};
  o.dt = 0.005;
  const auto t = with_overrides(s, o);
  EXPECT_EQ(t.dynamics->snapshots, std::vector<double>{0.25});
  EXPECT_EQ(t.dynamics->dt, 0.005);
  EXPECT_EQ(parse_number_list("1, 2.5,3"), (std::vector<double>{1, 2.5, 3}));
  EXPECT_THROW(parse_number_list("1,x"), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  const auto err = dir / "err.txt";
  spit(dir / "empty_state.json", "{\n\"name\": \"e\",\n\"grid\": {\"n\": 64, \"dx\": 0.1, \"hbar\": 0.16},\n\"state\": {}\n}\n");
  EXPECT_EQ(run_cli("run " + (dir / "empty_state.json").string() + " --out-dir " + (dir / "o").string(), err), 2);
  EXPECT_NE(slurp(err).find("empty_state.json:4:"), std::string::npos) << slurp(err);

  EXPECT_EQ(run_cli("frobnicate", err), 2);

  spit(dir / "bad.psi", "NOTAGRID and some bytes");
  EXPECT_EQ(run_cli("report " + (dir / "bad.psi").string() + " --out-dir " + (dir / "o").string(), err), 4);
  EXPECT_NE(slurp(err).find("offset 0"), std::string::npos) << slurp(err);
  EXPECT_EQ(run_cli("report " + (dir / "missing.psi").string(), err), 4);

  spit(dir / "blowup.json", R"({"name": "b", "grid": {"n": 64, "dx": 0.1, "hbar": 0.16},
    "state": {"gaussian": {"xi": 0.4}},
    "dynamics": {"params": {"harmonic": 1e308}, "snapshots": [1]}})");
  EXPECT_EQ(run_cli("run " + (dir / "blowup.json").string() + " --out-dir " + (dir / "o").string(), err), 3);
  EXPECT_NE(slurp(err).find("step"), std::string::npos) << slurp(err);
}

TEST(Cli, VerbsProduceFiles) {
  const auto dir = scratch("verbs");
  const auto err = dir / "err.txt";
  spit(dir / "g.json", R"({"name": "g", "grid": {"n": 128, "dx": 0.1, "hbar": 0.16},
    "state": {"gaussian": {"x0": 0.5, "xi": 0.4}}})");
  const std::string out = " --out-dir " + dir.string();
  ASSERT_EQ(run_cli("state " + (dir / "g.json").string() + out, err), 0) << slurp(err);
  ASSERT_TRUE(fs::exists(dir / "state.psi"));
  EXPECT_EQ(run_cli("wigner " + (dir / "state.psi").string() + " --x-range -1,1" + out, err), 0) << slurp(err);
  EXPECT_TRUE(fs::exists(dir / "state.wig"));
  EXPECT_EQ(run_cli("evolve " + (dir / "state.psi").string() + " --snapshots 0.5,1" + out, err), 0) << slurp(err);
  EXPECT_TRUE(fs::exists(dir / "state_t1.psi"));
  EXPECT_EQ(run_cli("scan " + (dir / "state.psi").string() + " --direction 0,1 --max 1.5" + out, err), 0)
      << slurp(err);
  EXPECT_TRUE(fs::exists(dir / "state_scan.csv"));
  EXPECT_EQ(run_cli("--threads 2 report " + (dir / "state.psi").string() + " --lyapunov 0.2" + out, err), 0)
      << slurp(err);
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_NEAR(rep["reports"][0]["structure"]["n_states"].get<double>(), 1.0 / (4 * kPi), 1e-9);
  EXPECT_EQ(run_cli("scan " + (dir / "state.psi").string() + " --direction 0,1 --max 1.5 --steps 4" + out, err), 2);
}
