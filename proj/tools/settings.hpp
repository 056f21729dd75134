#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridsim/config.hpp"
#include "hybridsim/synth.hpp"
#include "hybridsim/workload.hpp"

namespace hybridsim::cli {

/// Everything a config file can set. Sections: system, workload, trace,
/// mechanism, run. Missing keys keep their defaults; unknown keys are errors
/// so that typos do not silently fall back to defaults.
struct Settings {
  SystemConfig system;
  WorkloadConfig workload;
  SyntheticTraceConfig trace;
  std::string mechanism = "N&PAA";
  Time warning_duration = 120;
  bool cup_checkpoint_aligned = true;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  MechanismConfig mechanism_config() const;
  /// Synthetic trace and workload for one seed; the trace's capacity follows
  /// the system.
  std::vector<JobSpec> synthetic_jobs(std::uint64_t seed) const;
};

Settings load_settings(const std::filesystem::path& path);
void apply_json(const nlohmann::json& j, Settings& s);
nlohmann::json to_json(const Settings& s);

}  // namespace hybridsim::cli
