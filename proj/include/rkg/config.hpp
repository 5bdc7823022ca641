// Simulation and sweep configuration files (JSON).
#pragma once

#include "rkg/spectral.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rkg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSettings {
  SimConfig sim;
  /// "builtin:<name>", a file path, or "inline".
  std::string system_source;
  std::vector<int> sobolev_orders{0, 1, 2};
  /// Profile extractions at profile_t0, 2 profile_t0, ... <= t_end.
  double profile_t0 = 5.0;
  /// Decay fit window; defaults to [t_end / 8, t_end].
  std::optional<std::array<double, 2>> decay_window;
  double growth_threshold = 2.0;
  bool snapshots = false;

  std::array<double, 2> window() const;
};

/// Strict reader: unknown keys are rejected. Relative system file paths are
/// resolved against base_dir.
RunSettings parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunSettings load_run_config(const std::filesystem::path& path);

/// Fully resolved configuration with every default filled in; the system is
/// embedded in canonical form. Stable across runs, used for hashing.
nlohmann::json canonical_config(const RunSettings& s);

struct SweepSpec {
  RunSettings base;
  std::vector<double> epsilons;
  std::vector<double> dts;
};

/// A run config with an extra "sweep" object {epsilons?, dts?}; an absent list
/// means the base value, an empty list means no cells.
SweepSpec parse_sweep_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
SweepSpec load_sweep_config(const std::filesystem::path& path);

}  // namespace rkg
