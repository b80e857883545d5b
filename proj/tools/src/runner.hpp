#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenario.hpp"

namespace subplanck::tools {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

/// Writes output files into one directory and records each in a manifest
/// with its size and FNV-1a checksum.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  /// Returns the name, for use in reports.
  std::string write(const std::string& name, std::span<const std::uint8_t> bytes, const std::string& kind);
  std::string write_text(const std::string& name, const std::string& text, const std::string& kind);

  /// manifest.json: `header` fields plus "files" in emission order.
  void write_manifest(nlohmann::json header) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  nlohmann::json files_ = nlohmann::json::array();
};

/// Structure, coherence and orthogonality summary of one state.
nlohmann::json state_report(const WaveFunction& psi, const StructureOptions& opts, bool coherence);
nlohmann::json state_report(const DensityMatrix& rho, const StructureOptions& opts);

/// Decimal label for a time, e.g. 5 -> "t5", 2.5 -> "t2.5".
std::string time_label(double t);

/// "1,2.5,3" -> {1, 2.5, 3}; throws std::invalid_argument on junk.
std::vector<double> parse_number_list(const std::string& text);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<std::vector<double>> snapshots;
};

/// Applies command-line overrides to a parsed scenario.
Scenario with_overrides(Scenario s, const RunOptions& opts);

/// Full scenario: initial state, snapshots, Wigner grids, scans, classical
/// ensemble and report.json, then manifest.json. Returns the report.
nlohmann::json run_scenario(const Scenario& s, const RunOptions& opts);

/// Classical part of a scenario on its own (classical_*.csv, classical.json).
nlohmann::json run_classical(const Scenario& s, const RunOptions& opts);

}  // namespace subplanck::tools
