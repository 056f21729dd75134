#include "hybridsim/mechanisms.hpp"

#include <algorithm>
#include <numeric>

namespace hybridsim {

NodeSeconds preemption_overhead_rigid(Nodes nodes, Time now, Time last_checkpoint, Time setup) {
  return nodes * (std::max<Time>(0, now - last_checkpoint) + setup);
}

NodeSeconds preemption_overhead_malleable(Nodes nodes, Time warning, Time setup) {
  return nodes * (warning + setup);
}

std::vector<Shrink> shrink_evenly(std::span<const Candidate> malleables, Nodes deficit) {
  std::vector<Shrink> out;
  if (deficit <= 0) return out;
  std::vector<const Candidate*> jobs;
  NodeSeconds slack = 0;
  for (const auto& c : malleables) {
    if (c.nodes > c.n_min) {
      jobs.push_back(&c);
      slack += c.nodes - c.n_min;
    }
  }
  if (slack < deficit) throw std::invalid_argument("shrink supply below deficit");
  std::sort(jobs.begin(), jobs.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::vector<Nodes> give(jobs.size());
  std::vector<std::pair<NodeSeconds, std::size_t>> rem;
  Nodes given = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const NodeSeconds num = deficit * (jobs[i]->nodes - jobs[i]->n_min);
    give[i] = num / slack;
    given += give[i];
    rem.emplace_back(num % slack, i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t k = 0; given < deficit; ++k) {
    ++give[rem[k].second];
    ++given;
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (give[i] > 0) out.push_back({jobs[i]->id, jobs[i]->nodes - give[i]});
  }
  return out;
}

namespace {

std::vector<Candidate> by_overhead(std::vector<Candidate> c) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    return a.overhead != b.overhead ? a.overhead < b.overhead : a.id < b.id;
  });
  return c;
}

PreemptionPlan with_evictions(const ArrivalState& s) {
  PreemptionPlan plan;
  for (const auto& [job, n] : s.backfilled) {
    plan.victims.push_back({job, VictimAction::EvictBackfilled, n});
    plan.nodes_yielded += n;
  }
  return plan;
}

Nodes deficit_of(const ArrivalState& s) {
  // held already counts the backfilled nodes that eviction hands back
  return s.demand - (s.free + s.held + s.pending_drain);
}

}  // namespace

PreemptionPlan plan_preempt(const ArrivalState& s) {
  PreemptionPlan plan = with_evictions(s);
  Nodes deficit = deficit_of(s);
  if (deficit <= 0) {
    plan.feasible = true;
    return plan;
  }
  for (const auto& c : by_overhead(s.candidates)) {
    if (deficit <= 0) break;
    plan.victims.push_back(
        {c.id, c.kind == JobKind::Malleable ? VictimAction::WarnMalleable : VictimAction::KillRigid,
         c.nodes});
    plan.nodes_yielded += c.nodes;
    deficit -= c.nodes;
  }
  plan.feasible = deficit <= 0;
  if (!plan.feasible) plan = PreemptionPlan{};
  return plan;
}

PreemptionPlan plan_shrink_then_preempt(const ArrivalState& s) {
  const Nodes deficit = deficit_of(s);
  if (deficit <= 0) return plan_preempt(s);
  std::vector<Candidate> malleables;
  Nodes supply = 0;
  for (const auto& c : s.candidates) {
    if (c.kind != JobKind::Malleable) continue;
    malleables.push_back(c);
    supply += c.nodes - c.n_min;
  }
  if (supply < deficit) return plan_preempt(s);
  PreemptionPlan plan = with_evictions(s);
  plan.shrinks = shrink_evenly(malleables, deficit);
  plan.nodes_yielded += deficit;
  plan.feasible = true;
  return plan;
}

PreemptionPlan plan_arrival(ArrivalStrategy strategy, const ArrivalState& state) {
  return strategy == ArrivalStrategy::ShrinkThenPreempt ? plan_shrink_then_preempt(state)
                                                        : plan_preempt(state);
}

PrepPlan plan_predicted(Nodes deficit, Time est_arrival, Nodes earlier_unfilled,
                        std::span<const PrepCandidate> running, bool checkpoint_aligned) {
  PrepPlan plan;
  if (deficit <= 0) return plan;
  std::vector<const PrepCandidate*> others;
  for (const auto& r : running) {
    if (r.est_end <= est_arrival) plan.expected_supply += r.job.nodes;
    else if (r.job.kind != JobKind::OnDemand) others.push_back(&r);
  }
  plan.remaining_deficit =
      deficit - std::max<Nodes>(0, plan.expected_supply - std::max<Nodes>(0, earlier_unfilled));
  if (plan.remaining_deficit <= 0) {
    plan.remaining_deficit = 0;
    return plan;
  }
  std::sort(others.begin(), others.end(), [](auto* a, auto* b) {
    return a->job.overhead != b->job.overhead ? a->job.overhead < b->job.overhead
                                              : a->job.id < b->job.id;
  });
  Nodes total = 0;
  for (auto* r : others) total += r->job.nodes;
  if (total < plan.remaining_deficit) return plan;

  Nodes need = plan.remaining_deficit;
  for (auto* r : others) {
    if (need <= 0) break;
    PrepVictim v{r->job.id, PrepAction::KillNow, r->job.nodes, 0};
    if (r->job.kind == JobKind::Malleable) {
      v.action = PrepAction::Warn;
    } else if (checkpoint_aligned && r->next_checkpoint && *r->next_checkpoint <= est_arrival) {
      v.action = PrepAction::KillAtCheckpoint;
      v.when = *r->next_checkpoint;
    }
    plan.victims.push_back(v);
    need -= r->job.nodes;
  }
  return plan;
}

}  // namespace hybridsim
