#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hybridsim/config.hpp"
#include "hybridsim/metrics.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

/// One simulation of a sweep. Workloads are shared between tasks.
struct SweepTask {
  std::string mechanism;
  std::string workload;  // label, e.g. W1
  std::string variant;   // free-form label, e.g. scale=0.5
  std::uint64_t seed = 0;
  SystemConfig system;
  std::shared_ptr<const std::vector<JobSpec>> jobs;
};

struct SweepRun {
  std::string mechanism;
  std::string workload;
  std::string variant;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::optional<double>>> metrics;  // see metric_values
  std::string error;  // set when the run failed

  bool ok() const { return error.empty(); }
};

/// Runs every task, `threads` at a time (0 = hardware concurrency). Each
/// simulation stays single-threaded; results come back in task order and a
/// failing task does not stop the others.
std::vector<SweepRun> run_sweep(const std::vector<SweepTask>& tasks, unsigned threads = 0);

struct AggregateRow {
  std::string mechanism;
  std::string workload;
  std::string variant;
  std::string metric;
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one sample
};

/// Mean and standard deviation per (mechanism, workload, variant, metric)
/// over seeds. Absent metric values are skipped. Rows are sorted.
std::vector<AggregateRow> aggregate(const std::vector<SweepRun>& runs);

/// Per-run metric table (one row per run) and its reader; aggregating the
/// read-back runs reproduces the original aggregate exactly.
void write_runs_csv(std::ostream& out, const std::vector<SweepRun>& runs);
std::vector<SweepRun> read_runs_csv(std::istream& in);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// RFC 4180 field quoting and line splitting.
std::string csv_field(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace hybridsim
