#pragma once

#include <vector>

#include "hybridsim/config.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

/// Periodic checkpointing parameters for one rigid job.
struct CheckpointPlan {
  Time interval = 0;    // compute seconds between checkpoints
  Time write_cost = 0;  // wall seconds per checkpoint write
};

/// Interval sqrt(2 * write_cost * mtbf) scaled by `scale`, rounded to whole
/// seconds and never below one second.
Time daly_interval(Time write_cost, Time mtbf, double scale);

CheckpointPlan checkpoint_plan(Nodes nodes, const SystemConfig& sys);

/// Closed-form timeline of one rigid run segment: setup, then compute chunks
/// of `interval` seconds separated by checkpoint writes. A checkpoint is
/// written after a chunk only if compute remains afterwards.
class RigidTimeline {
 public:
  RigidTimeline(Time start, Time setup, Time remaining_compute,
                CheckpointPlan plan);

  Time start() const { return start_; }
  Time compute_start() const { return start_ + setup_; }
  Time finish() const;
  int checkpoint_count() const;
  Time checkpoint_complete_time(int k) const;
  /// First checkpoint completing strictly after `t`, if any.
  std::optional<Time> next_checkpoint_after(Time t) const;

  struct Snapshot {
    Time setup_elapsed = 0;
    Time compute_done = 0;     // compute seconds done in this segment
    Time saved = 0;            // compute seconds covered by completed checkpoints
    Time write_elapsed = 0;    // wall seconds spent writing (completed or not)
    int checkpoints_done = 0;
    Time last_checkpoint = 0;  // wall time of the last completed write, or setup end
    bool in_setup = false;
    bool writing = false;
  };
  /// State at wall time `t` with start <= t <= finish.
  Snapshot at(Time t) const;

 private:
  Time start_;
  Time setup_;
  Time remaining_;
  CheckpointPlan plan_;
};

/// Completion times of all checkpoints of a segment.
std::vector<Time> next_checkpoint_schedule(const RigidTimeline& timeline);

}  // namespace hybridsim
