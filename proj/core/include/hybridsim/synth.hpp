#pragma once

#include <cstdint>
#include <vector>

#include "hybridsim/workload.hpp"

namespace hybridsim {

/// Parameters of a synthetic capability-computing trace. Used when no
/// production trace is at hand: jobs belong to projects with heavy-tailed
/// activity, sizes are powers of two clustered per project and runtimes
/// are log-normal per project, capped at one day.
struct SyntheticTraceConfig {
  std::size_t jobs = 2000;
  Nodes capacity = 512;
  std::size_t projects = 80;
  double offered_load = 0.90;
  Nodes min_size = 16;
  Time min_runtime = 300;
  Time max_runtime = 86400;
  double project_weight_sigma = 1.0;
  double estimate_slack_max = 2.5;  // estimate = actual * U[1, max]
  std::uint64_t seed = 1;
};

std::vector<RawTraceJob> synthesize_trace(const SyntheticTraceConfig& cfg);

/// synthesize_trace followed by generate_workload; the workload's capacity
/// is taken from the trace configuration.
std::vector<JobSpec> synthetic_workload(const SyntheticTraceConfig& trace, WorkloadConfig cfg);

}  // namespace hybridsim
