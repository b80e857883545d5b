#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "subplanck/subplanck.hpp"

namespace subplanck::tools {

/// Invalid scenario file. what() reads "<source>:<line>: <pointer>: <message>".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& source, int line, const std::string& pointer, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  int line_;
  std::string pointer_;
};

struct GridConfig {
  std::size_t n = 0;
  double dx = 0.0;
  double hbar = 0.0;
};

struct CatState {
  double x0 = 0.0;
  double xi = 0.0;
};

struct RandomSparseState {
  std::size_t count = 0;
  double xi = 0.0;
  double x_lo = 0.0, x_hi = 0.0;
  double p_lo = 0.0, p_hi = 0.0;
  double min_separation = 5.5;
};

struct FileState {
  std::filesystem::path path;
};

using StateSource = std::variant<GaussianPacket, CatState, CompassSpec, RandomSparseState, SparseSpec, FileState>;

struct DynamicsConfig {
  DrivenPendulumParams params = kChaoticPendulum;
  double dt = kDefaultDt;
  std::vector<double> snapshots;
};

struct WignerConfig {
  WignerWindow window;
  bool tile = false;  ///< measure the central checkerboard cell
};

struct ScanConfig {
  Displacement direction;
  double max = 0.0;
  std::size_t steps = 64;
  double threshold = kInvE;
};

/// Classical patch matching the initial state's means and spreads.
struct ClassicalConfig {
  std::size_t count = 2000;
  std::size_t lyapunov_seeds = 0;
  double lyapunov_time = 200.0;
};

struct ReportConfig {
  bool coherence = true;
  std::optional<double> lyapunov;
  std::optional<double> delta_p0;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::optional<GridConfig> grid;  ///< absent only for a file state
  StateSource state;
  std::optional<DynamicsConfig> dynamics;
  std::optional<WignerConfig> wigner;
  std::optional<ScanConfig> scan;
  std::optional<ClassicalConfig> classical;
  ReportConfig report;
  std::filesystem::path base_dir;  ///< relative file paths resolve against this
};

/// Parses and validates a scenario. Unknown keys, missing required keys,
/// wrong types and a state without exactly one source all raise SchemaError
/// pointing at the offending line of `text`.
Scenario parse_scenario(const std::string& text, const std::string& source_name,
                        const std::filesystem::path& base_dir = {});

/// Reads a scenario file; throws IoError when it cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Builds the initial state of a scenario.
WaveFunction build_state(const Scenario& s);

}  // namespace subplanck::tools
