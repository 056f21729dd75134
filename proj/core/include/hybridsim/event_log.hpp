#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

/// Same-time events are processed in this order.
enum class EventClass {
  JobFinish = 0,
  CheckpointComplete,
  WarningExpiry,
  OnDemandArrival,
  AdvanceNotice,
  ReservationTimeout,
  JobSubmit,
  SchedulerPass,
};

/// Scheduler actions recorded between events.
enum class Action {
  Start,
  Backfill,
  BackfillReserved,
  Commit,
  Stall,
  Kill,
  Warn,
  Evict,
  Shrink,
  Expand,
  Resume,
  Pledge,
  Reserve,
  Release,
};

std::string_view to_string(EventClass c);
std::string_view to_string(Action a);

/// One line of the event log. `kind` is either an EventClass name or an
/// action name; `nodes` and `ref` carry action details (ref is an owning
/// on-demand job where relevant, -1 otherwise).
struct LogRecord {
  Time time = 0;
  std::string kind;
  JobId job = kNoJob;
  Nodes nodes = 0;
  JobId ref = kNoJob;

  bool operator==(const LogRecord&) const = default;
};

inline constexpr int kEventLogVersion = 1;

class EventLog {
 public:
  void event(Time t, EventClass c, JobId job, Nodes nodes = 0, JobId ref = kNoJob);
  void action(Time t, Action a, JobId job, Nodes nodes = 0, JobId ref = kNoJob);

  const std::vector<LogRecord>& records() const { return records_; }
  bool operator==(const EventLog&) const = default;

  /// CSV with a version comment line and a header row.
  void write_csv(std::ostream& out) const;
  static EventLog read_csv(std::istream& in);

 private:
  std::vector<LogRecord> records_;
};

/// First differing record index, or -1 when the logs are equal.
long first_difference(const EventLog& a, const EventLog& b);

}  // namespace hybridsim
