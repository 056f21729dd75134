#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridsim {

/// Simulated time in whole seconds.
using Time = std::int64_t;
using JobId = std::int64_t;
using Nodes = std::int64_t;
using NodeSeconds = std::int64_t;

inline constexpr JobId kNoJob = -1;

enum class JobKind { Rigid, OnDemand, Malleable };

enum class NoticeCategory { NoNotice, Accurate, Early, Late };

std::string_view to_string(JobKind kind);
std::string_view to_string(NoticeCategory category);
JobKind parse_job_kind(std::string_view text);
NoticeCategory parse_notice_category(std::string_view text);

/// Advance-notice description attached to every on-demand job.
///
/// NoNotice jobs carry no notice_time and their estimated_arrival equals the
/// actual arrival. Only the arrival time is ever mis-estimated; size and
/// runtime in a notice are exact.
struct NoticeProfile {
  NoticeCategory category = NoticeCategory::NoNotice;
  std::optional<Time> notice_time;
  Time estimated_arrival = 0;
  Time actual_arrival = 0;
  Nodes estimated_size = 0;
  Time estimated_runtime = 0;

  bool operator==(const NoticeProfile&) const = default;
};

/// Immutable description of one submitted job.
///
/// For malleable jobs `size` equals `n_max` and `runtime_estimate` is the
/// estimate at `n_max`. `actual_work` is node-seconds of useful computation,
/// excluding setup; it is never shown to the scheduler.
struct JobSpec {
  JobId id = 0;
  Time submit_time = 0;
  JobKind kind = JobKind::Rigid;
  Nodes size = 1;
  Nodes n_min = 1;
  Nodes n_max = 1;
  Time runtime_estimate = 0;
  NodeSeconds actual_work = 0;
  Time setup_time = 0;
  std::optional<NoticeProfile> notice;
  std::string project;

  bool operator==(const JobSpec&) const = default;

  /// Seconds of computation at the job's fixed size (rigid and on-demand).
  Time compute_seconds() const { return size > 0 ? actual_work / size : 0; }
};

/// Single-node work of a malleable job observed to run `runtime_at_max`
/// seconds (setup included) on `n_max` nodes under the linear-speedup model.
NodeSeconds derive_t_single(Time runtime_at_max, Time setup, Nodes n_max);

/// Wall time to finish `work` node-seconds on `n` nodes after `setup`.
/// Partial seconds round up: the simulator advances in whole seconds.
Time malleable_runtime(NodeSeconds work, Nodes n, Time setup);

inline constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a <= 0 ? 0 : (a + b - 1) / b;
}

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const JobSpec& spec);

/// Raised when a simulation invariant is broken; always a simulator bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hybridsim
