#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hybridsim/config.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

/// Node-seconds wasted by preempting a running job now. Rigid jobs lose
/// compute since their last checkpoint and replay setup; malleable jobs
/// occupy their nodes through the warning and replay setup.
NodeSeconds preemption_overhead_rigid(Nodes nodes, Time now, Time last_checkpoint, Time setup);
NodeSeconds preemption_overhead_malleable(Nodes nodes, Time warning, Time setup);

/// A running job that may be preempted or shrunk.
struct Candidate {
  JobId id = 0;
  JobKind kind = JobKind::Rigid;
  Nodes nodes = 0;
  Nodes n_min = 0;
  NodeSeconds overhead = 0;
};

enum class VictimAction { KillRigid, WarnMalleable, EvictBackfilled };

struct Victim {
  JobId job = 0;
  VictimAction action = VictimAction::KillRigid;
  Nodes nodes = 0;

  bool operator==(const Victim&) const = default;
};

struct Shrink {
  JobId job = 0;
  Nodes new_size = 0;

  bool operator==(const Shrink&) const = default;
};

struct PreemptionPlan {
  std::vector<Victim> victims;  // evictions first, then ascending overhead
  std::vector<Shrink> shrinks;
  Nodes nodes_yielded = 0;
  bool feasible = false;
};

/// Divides `deficit` over the malleable jobs in proportion to their slack
/// (current - n_min), largest remainder first, ties to the smaller id.
/// Requires the total slack to cover the deficit.
std::vector<Shrink> shrink_evenly(std::span<const Candidate> malleables, Nodes deficit);

/// Everything the arrival handler looks at when an on-demand job arrives.
struct ArrivalState {
  Nodes demand = 0;
  Nodes free = 0;
  Nodes held = 0;            // own reservation, including backfilled nodes
  Nodes pending_drain = 0;   // warned malleables already pledged to this job
  std::vector<std::pair<JobId, Nodes>> backfilled;  // on own reservation
  std::vector<Candidate> candidates;                // preemptable running jobs
};

/// Greedy victims in ascending overhead until the deficit is covered.
PreemptionPlan plan_preempt(const ArrivalState& state);
/// Shrink running malleables evenly when their slack covers the deficit,
/// otherwise identical to plan_preempt.
PreemptionPlan plan_shrink_then_preempt(const ArrivalState& state);
PreemptionPlan plan_arrival(ArrivalStrategy strategy, const ArrivalState& state);

/// A running job as seen when preparing for a predicted arrival.
struct PrepCandidate {
  Candidate job;
  Time est_end = 0;
  std::optional<Time> next_checkpoint;  // rigid only
};

enum class PrepAction { KillNow, KillAtCheckpoint, Warn };

struct PrepVictim {
  JobId job = 0;
  PrepAction action = PrepAction::KillNow;
  Nodes nodes = 0;
  Time when = 0;

  bool operator==(const PrepVictim&) const = default;
};

struct PrepPlan {
  Nodes expected_supply = 0;
  Nodes remaining_deficit = 0;
  std::vector<PrepVictim> victims;
};

/// Plans preemptions so that `deficit` nodes are available at
/// `est_arrival`. Jobs estimated to end by then count as supply, less what
/// earlier reservations still need; the rest comes from victims in
/// ascending overhead, but only when they can cover it completely. Rigid
/// victims stop right after a checkpoint that completes in time when
/// `checkpoint_aligned`, otherwise immediately.
PrepPlan plan_predicted(Nodes deficit, Time est_arrival, Nodes earlier_unfilled,
                        std::span<const PrepCandidate> running, bool checkpoint_aligned);

}  // namespace hybridsim
