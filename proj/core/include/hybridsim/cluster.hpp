#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

/// Nodes banked for one on-demand job.
struct ReservationState {
  JobId owner = kNoJob;
  Nodes target = 0;
  Nodes held = 0;      // banked nodes, including those lent to backfilled jobs
  Nodes occupied = 0;  // part of `held` currently running backfilled jobs
  std::optional<Time> expiry;  // set iff the owner gave advance notice
  Time priority = 0;           // notice time, or arrival time without notice

  Nodes idle() const { return held - occupied; }
  Nodes unfilled() const { return target - held; }
};

/// Node-count accounting. Node identity is not modelled.
///
/// Invariant after every mutation:
///   free + sum(allocations) + sum(held - occupied) == capacity
/// Jobs backfilled onto reserved nodes appear both in `allocations` and in
/// their reservation's `occupied` count.
class ClusterLedger {
 public:
  explicit ClusterLedger(Nodes capacity);

  Nodes capacity() const { return capacity_; }
  Nodes free() const { return free_; }
  Nodes allocated(JobId job) const;
  Nodes total_allocated() const { return allocated_total_; }
  Nodes total_idle_reserved() const { return held_total_ - occupied_total_; }
  const std::map<JobId, Nodes>& allocations() const { return allocations_; }
  const std::map<JobId, ReservationState>& reservations() const { return reservations_; }
  const ReservationState* reservation(JobId owner) const;
  std::optional<JobId> backfill_owner(JobId job) const;
  std::vector<JobId> backfilled_on(JobId owner) const;

  /// Takes n free nodes for `job`. Returns false and leaves the ledger
  /// unchanged when fewer than n nodes are free.
  bool allocate(JobId job, Nodes n);

  /// Returns n of `job`'s nodes. Nodes of a job backfilled on a reservation
  /// go back to that reservation. Otherwise they bank into each listed
  /// beneficiary's unfilled reservation in order, and the rest become free.
  /// Returns the number of nodes that became free.
  Nodes release(JobId job, Nodes n, std::span<const JobId> beneficiaries = {});
  Nodes release(JobId job, Nodes n, std::optional<JobId> beneficiary);

  void open_reservation(JobId owner, Nodes target, std::optional<Time> expiry, Time priority);
  bool has_reservation(JobId owner) const { return reservations_.contains(owner); }

  /// Moves min(free, want, unfilled) free nodes into the owner's reservation.
  Nodes reserve_available(JobId owner, Nodes want);

  /// Runs `job` on n idle nodes of `owner`'s reservation. False if the
  /// reservation has fewer idle nodes.
  bool backfill_on_reserved(JobId job, JobId owner, Nodes n);

  /// Stops every job backfilled on `owner`'s nodes; their nodes return to the
  /// reservation. Returns job ids in ascending order.
  std::vector<JobId> evict_backfilled(JobId owner);

  /// Starts the owner on n of its idle reserved nodes and closes the
  /// reservation. Returns the surplus nodes that became free.
  Nodes consume_reservation(JobId owner, Nodes n);

  /// Closes a reservation: idle nodes become free and backfilled jobs keep
  /// running as ordinary allocations. Returns the nodes freed.
  Nodes dissolve_reservation(JobId owner);

  /// O(1) check of the cached conservation identity; throws
  /// InvariantViolation.
  void check() const;
  /// Full recomputation from the maps.
  void audit() const;

  void set_paranoid(bool on) { paranoid_ = on; }
  void set_audit_log(std::ostream* out) { audit_log_ = out; }
  void set_time(Time t) { now_ = t; }

 private:
  void after(const char* op, JobId job, Nodes n);

  Nodes capacity_;
  Nodes free_;
  Nodes allocated_total_ = 0;
  Nodes held_total_ = 0;
  Nodes occupied_total_ = 0;
  std::map<JobId, Nodes> allocations_;
  std::map<JobId, ReservationState> reservations_;
  std::map<JobId, JobId> backfill_links_;
  bool paranoid_ = false;
  std::ostream* audit_log_ = nullptr;
  Time now_ = 0;
};

}  // namespace hybridsim
