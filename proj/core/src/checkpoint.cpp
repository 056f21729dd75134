#include "hybridsim/checkpoint.hpp"

#include <algorithm>
#include <cmath>

namespace hybridsim {

Time daly_interval(Time write_cost, Time mtbf, double scale) {
  const double tau = scale * std::sqrt(2.0 * static_cast<double>(write_cost) *
                                       static_cast<double>(mtbf));
  return std::max<Time>(1, std::llround(tau));
}

CheckpointPlan checkpoint_plan(Nodes nodes, const SystemConfig& sys) {
  CheckpointPlan plan;
  plan.write_cost = nodes < sys.checkpoint_node_threshold
                        ? sys.checkpoint_cost_small
                        : sys.checkpoint_cost_large;
  plan.interval = daly_interval(plan.write_cost, sys.mtbf, sys.checkpoint_scale);
  return plan;
}

RigidTimeline::RigidTimeline(Time start, Time setup, Time remaining_compute,
                             CheckpointPlan plan)
    : start_(start), setup_(setup), remaining_(remaining_compute), plan_(plan) {}

int RigidTimeline::checkpoint_count() const {
  if (remaining_ <= 0) return 0;
  return static_cast<int>(ceil_div(remaining_, plan_.interval) - 1);
}

Time RigidTimeline::finish() const {
  return start_ + setup_ + remaining_ +
         static_cast<Time>(checkpoint_count()) * plan_.write_cost;
}

Time RigidTimeline::checkpoint_complete_time(int k) const {
  return compute_start() +
         static_cast<Time>(k + 1) * (plan_.interval + plan_.write_cost);
}

std::optional<Time> RigidTimeline::next_checkpoint_after(Time t) const {
  const int n = checkpoint_count();
  if (n == 0) return std::nullopt;
  const Time cycle = plan_.interval + plan_.write_cost;
  // smallest k with compute_start + (k+1)*cycle > t
  Time k = 0;
  if (t >= compute_start()) k = (t - compute_start()) / cycle;
  if (k >= n) return std::nullopt;
  return checkpoint_complete_time(static_cast<int>(k));
}

RigidTimeline::Snapshot RigidTimeline::at(Time t) const {
  Snapshot s;
  if (t < compute_start()) {
    s.in_setup = true;
    s.setup_elapsed = std::max<Time>(0, t - start_);
    s.last_checkpoint = compute_start();
    return s;
  }
  s.setup_elapsed = setup_;
  const Time cycle = plan_.interval + plan_.write_cost;
  const Time u = t - compute_start();
  const Time n = checkpoint_count();
  const Time q = u / cycle;
  if (q >= n) {
    s.checkpoints_done = static_cast<int>(n);
    s.compute_done = std::min(remaining_, n * plan_.interval + (u - n * cycle));
    s.write_elapsed = n * plan_.write_cost;
  } else {
    const Time r = u % cycle;
    s.checkpoints_done = static_cast<int>(q);
    s.compute_done = q * plan_.interval + std::min(r, plan_.interval);
    s.write_elapsed = q * plan_.write_cost + std::max<Time>(0, r - plan_.interval);
    s.writing = r >= plan_.interval;
  }
  s.saved = static_cast<Time>(s.checkpoints_done) * plan_.interval;
  s.last_checkpoint = compute_start() + static_cast<Time>(s.checkpoints_done) * cycle;
  return s;
}

std::vector<Time> next_checkpoint_schedule(const RigidTimeline& timeline) {
  std::vector<Time> out;
  const int n = timeline.checkpoint_count();
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(timeline.checkpoint_complete_time(k));
  return out;
}

}  // namespace hybridsim
