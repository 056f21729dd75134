#pragma once

#include <cstdint>
#include <vector>

#include "hybridsim/config.hpp"
#include "hybridsim/event_log.hpp"
#include "hybridsim/metrics.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

inline constexpr Nodes kTinyMaxNodes = 4;
inline constexpr std::size_t kTinyMaxJobs = 6;

struct TinyInstance {
  SystemConfig system;
  Time warning_duration = 3;
  std::vector<JobSpec> jobs;
};

struct OracleResult {
  RunRecord record;
  EventLog log;
};

/// Reference simulator: steps the clock one second at a time and rescans
/// every job, with no event queue. Slow by design; refuses instances above
/// the tiny bounds with std::invalid_argument.
OracleResult oracle_run(const TinyInstance& instance, MechanismConfig mech);

/// Random instance within the tiny bounds: small checkpoint costs and MTBF
/// so that checkpoints, warnings and reservation timeouts all happen.
TinyInstance random_tiny_instance(std::uint64_t seed);

}  // namespace hybridsim
