// Command-line front end: check, decompose, resonance, simulate, sweep,
// report and builtin subcommands.
#pragma once

#include "rkg/config.hpp"
#include "rkg/diagnostics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace rkg {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotNull = 10;
inline constexpr int kExitBlowUp = 11;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

/// Output root: $RKG_OUTPUT_ROOT, else ./rkg-output.
std::filesystem::path output_root();

struct SimulationOutcome {
  RunRecord record;
  GrowthReport growth;
  nlohmann::json decay;  // {slope, intercept, points, window} or {error, window}
  std::vector<ProfileSummary> profiles;
  bool gaps_decreasing = false;
  std::optional<GridState> final_state;
  std::string diagnostics_csv;
  std::string profiles_csv;
};

SimulationOutcome simulate(const RunSettings& settings);

/// Writes diagnostics.csv, profiles.csv, run.json and manifest.json into dir.
void write_run_directory(const std::filesystem::path& dir, const RunSettings& settings,
                         const SimulationOutcome& outcome);

nlohmann::json run_summary_json(const RunSettings& settings, const SimulationOutcome& outcome);

/// Runs every (epsilon, dt) cell on up to `jobs` threads. With more than one
/// dt, a reference run at min(dt) / 8 per epsilon yields energy-norm errors of
/// the final state and ratios between consecutive rungs.
nlohmann::json run_sweep(const SweepSpec& spec, int jobs, const std::filesystem::path& dir);

}  // namespace rkg
