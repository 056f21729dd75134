#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

inline constexpr Time kNever = std::numeric_limits<Time>::max();

/// Scheduler-visible view of one waiting job.
struct WaitingJob {
  JobId id = 0;
  JobKind kind = JobKind::Rigid;
  Nodes min_nodes = 1;  // n_min for malleable, size otherwise
  Nodes max_nodes = 1;
  Time first_submit = 0;
  bool pinned = false;  // on-demand job that could not start at arrival
  Time pin_time = 0;
  // Estimated wall time: fixed_duration for fixed-size jobs, otherwise
  // setup + ceil(est_work / n).
  Time fixed_duration = 0;
  Time setup = 0;
  NodeSeconds est_work = 0;

  Time duration(Nodes n) const;
};

/// Nodes a running job is expected to hand back to the free pool.
struct ExpectedRelease {
  Time est_end = 0;
  Nodes nodes = 0;
};

/// Idle nodes banked for an on-demand job that has not arrived yet.
struct IdleReservation {
  JobId owner = kNoJob;
  Time priority = 0;
  Nodes idle = 0;
};

struct QueueSnapshot {
  Time now = 0;
  Nodes free = 0;
  std::vector<WaitingJob> waiting;
  std::vector<ExpectedRelease> releases;
  std::vector<IdleReservation> reservations;  // backfill-on-reserved targets
};

struct StartDecision {
  JobId job = 0;
  Nodes nodes = 0;
  bool backfilled = false;
  std::optional<JobId> on_reservation;

  bool operator==(const StartDecision&) const = default;
};

struct HeadReservation {
  JobId job = 0;
  Time start = kNever;
  Nodes nodes = 0;   // nodes the head needs at `start`
  Nodes extra = 0;   // nodes left over at `start` for long backfill jobs
};

struct PassResult {
  std::vector<StartDecision> starts;
  std::optional<HeadReservation> head;
};

/// Pinned on-demand jobs first (by pin time), then everyone else by first
/// submission time; job id breaks ties.
std::vector<WaitingJob> fcfs_order(std::vector<WaitingJob> waiting);

/// Earliest time at which `need` nodes are available, starting from `free`
/// and adding releases in order of estimated end. kNever if never.
Time projected_start(Nodes free, std::vector<ExpectedRelease> releases, Time now, Nodes need,
                     Nodes* extra = nullptr);

/// One FCFS pass with EASY backfilling. Jobs at the head start while they
/// fit; the first job that does not fit gets a reservation and later jobs
/// start now only if they end before it or fit in the leftover nodes.
/// Jobs that cannot use free nodes may run on idle reserved nodes of
/// on-demand jobs that have not arrived yet (on-demand jobs never do).
/// Malleable jobs take the largest feasible size.
PassResult easy_backfill(const QueueSnapshot& snapshot);

}  // namespace hybridsim
