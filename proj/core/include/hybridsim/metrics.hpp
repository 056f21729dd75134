#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsim/config.hpp"
#include "hybridsim/event_log.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

struct JobOutcome {
  JobId id = 0;
  JobKind kind = JobKind::Rigid;
  Time first_submit = 0;
  Time finish = -1;     // -1 if never finished
  int preemptions = 0;  // kills, warnings and evictions
  int shrinks = 0;
  bool instant = false;  // on-demand only

  bool operator==(const JobOutcome&) const = default;
};

/// Node-seconds by use. allocated is integrated independently from the
/// ledger and must equal the sum of the other fields.
struct NodeSecondTotals {
  NodeSeconds useful = 0;
  NodeSeconds lost_compute = 0;
  NodeSeconds setup = 0;
  NodeSeconds checkpoint_writes = 0;
  NodeSeconds drain_occupancy = 0;
  NodeSeconds completion_slack = 0;  // unused tail of a malleable job's last second
  NodeSeconds allocated = 0;

  NodeSeconds accounted() const {
    return useful + lost_compute + setup + checkpoint_writes + drain_occupancy +
           completion_slack;
  }
  bool operator==(const NodeSecondTotals&) const = default;
};

/// Raw result of one simulation, before any averaging.
struct RunRecord {
  Nodes capacity = 0;
  Time horizon_start = 0;
  Time horizon_end = 0;
  std::vector<JobOutcome> jobs;
  NodeSecondTotals totals;

  bool operator==(const RunRecord&) const = default;
};

struct LatencyStats {
  std::size_t samples = 0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

LatencyStats summarize_latency(std::vector<double> samples_ms);

struct MetricsReport {
  std::string mechanism;
  std::size_t jobs = 0;
  std::size_t rigid_jobs = 0;
  std::size_t malleable_jobs = 0;
  std::size_t on_demand_jobs = 0;
  std::optional<double> avg_turnaround;
  std::optional<double> avg_turnaround_rigid;
  std::optional<double> avg_turnaround_malleable;
  std::optional<double> avg_turnaround_on_demand;
  std::optional<double> instant_start_rate;
  double preemption_ratio_rigid = 0.0;
  double preemption_ratio_malleable = 0.0;
  std::optional<double> system_utilization;
  double waste_fraction = 0.0;
  double idle_fraction = 0.0;
  NodeSeconds useful = 0;
  NodeSeconds lost_compute = 0;
  NodeSeconds setup_replay = 0;
  NodeSeconds checkpoint_writes = 0;
  NodeSeconds drain_occupancy = 0;
  NodeSeconds completion_slack = 0;
  NodeSeconds idle = 0;
  std::size_t shrink_events = 0;
  Time horizon_start = 0;
  Time horizon_end = 0;
};

double turnaround(const JobOutcome& job);
std::optional<double> average_turnaround(const std::vector<JobOutcome>& jobs,
                                         std::optional<JobKind> kind = std::nullopt);
std::optional<double> instant_start_rate(const std::vector<JobOutcome>& jobs);
double preemption_ratio(const std::vector<JobOutcome>& jobs, JobKind kind);
/// Useful node-seconds over capacity x horizon; absent for an empty horizon.
/// With the toggles off, setup or checkpoint writes count as useful.
std::optional<double> system_utilization(const RunRecord& run, const SystemConfig& sys);

MetricsReport compute_metrics(const RunRecord& run, const SystemConfig& sys,
                              const std::string& mechanism);

/// Per-kind turnaround recomputed from the event log alone.
struct LogTurnaround {
  std::optional<double> overall;
  std::optional<double> rigid;
  std::optional<double> malleable;
  std::optional<double> on_demand;
};
LogTurnaround turnaround_from_log(const EventLog& log, const std::vector<JobSpec>& jobs);

nlohmann::json to_json(const MetricsReport& r);
/// Flat metric name/value pairs in a fixed order; used for CSV and sweeps.
std::vector<std::pair<std::string, std::optional<double>>> metric_values(const MetricsReport& r);
void write_csv(std::ostream& out, const MetricsReport& r);
void write_text(std::ostream& out, const MetricsReport& r);
/// Shortest round-trip decimal form; "" for an absent value.
std::string format_number(std::optional<double> v);

}  // namespace hybridsim
