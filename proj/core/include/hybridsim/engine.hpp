#pragma once

#include <iosfwd>
#include <vector>

#include "hybridsim/config.hpp"
#include "hybridsim/event_log.hpp"
#include "hybridsim/metrics.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

struct EngineOptions {
  bool paranoid_ledger = false;  // full ledger audit after every mutation
  bool measure_latency = false;
  std::ostream* ledger_audit = nullptr;
};

struct LatencySample {
  double ms = 0.0;
  std::size_t queued = 0;  // waiting jobs when the decision was taken
};

struct RunResult {
  RunRecord record;
  EventLog log;
  std::vector<LatencySample> arrival_latency;
  std::vector<LatencySample> pass_latency;
};

/// Runs one simulation to completion.
///
/// Throws std::invalid_argument for jobs that can never run (duplicate ids,
/// minimum size above capacity) and InvariantViolation when an internal
/// consistency check fails.
RunResult simulate(const std::vector<JobSpec>& jobs, const SystemConfig& sys,
                   const MechanismConfig& mech, const EngineOptions& opts = {});

}  // namespace hybridsim
