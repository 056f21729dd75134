// Property tests over randomly generated inputs.
#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "hybridsim/engine.hpp"
#include "hybridsim/policy.hpp"
#include "hybridsim/random.hpp"
#include "hybridsim/synth.hpp"

using namespace hybridsim;

namespace {

QueueSnapshot random_snapshot(Rng& rng) {
  QueueSnapshot s;
  const Nodes capacity = rng.uniform_int(2, 48);
  s.now = rng.uniform_int(0, 500);
  Nodes left = capacity;
  while (left > 0 && rng.bernoulli(0.75)) {
    const Nodes n = rng.uniform_int(1, left);
    s.releases.push_back({s.now + rng.uniform_int(1, 300), n});
    left -= n;
  }
  s.free = left;
  const int k = static_cast<int>(rng.uniform_int(1, 10));
  for (int i = 0; i < k; ++i) {
    WaitingJob w;
    w.id = i + 1;
    w.first_submit = rng.uniform_int(0, s.now);
    const Nodes size = rng.uniform_int(1, capacity);
    if (rng.bernoulli(0.4)) {
      w.kind = JobKind::Malleable;
      w.max_nodes = size;
      w.min_nodes = rng.uniform_int(1, size);
      w.setup = rng.uniform_int(0, 10);
      w.est_work = rng.uniform_int(1, 300) * size;
    } else {
      w.min_nodes = w.max_nodes = size;
      w.fixed_duration = rng.uniform_int(1, 400);
    }
    s.waiting.push_back(w);
  }
  return s;
}

// Head start found by walking the clock forward one second at a time.
Time walk_head_start(Time now, Nodes free, const std::vector<std::pair<Time, Nodes>>& busy,
                     Nodes need) {
  Time end = now;
  for (const auto& b : busy) end = std::max(end, b.first);
  for (Time t = now; t <= end; ++t) {
    Nodes avail = free;
    for (const auto& b : busy) avail += b.first <= t ? b.second : 0;
    if (avail >= need) return t;
  }
  return kNever;
}

}  // namespace

TEST(Property, BackfillNeverDelaysHead) {
  Rng rng(2024);
  int checked = 0;
  for (int round = 0; round < 200; ++round) {
    const QueueSnapshot s = random_snapshot(rng);
    const PassResult pr = easy_backfill(s);
    if (!pr.head) continue;
    std::map<JobId, WaitingJob> by_id;
    for (const auto& w : s.waiting) by_id[w.id] = w;
    std::vector<std::pair<Time, Nodes>> busy;
    for (const auto& r : s.releases) busy.emplace_back(r.est_end, r.nodes);
    Nodes free = s.free;
    for (const auto& d : pr.starts) {
      busy.emplace_back(s.now + by_id.at(d.job).duration(d.nodes), d.nodes);
      free -= d.nodes;
    }
    const Nodes need = by_id.at(pr.head->job).min_nodes;
    const Time with = walk_head_start(s.now, free, busy, need);
    EXPECT_EQ(with, pr.head->start) << "round " << round;
    for (std::size_t i = s.releases.size(); i < busy.size(); ++i) {
      const auto& d = pr.starts[i - s.releases.size()];
      if (!d.backfilled) continue;
      auto without = busy;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
      EXPECT_EQ(walk_head_start(s.now, free + d.nodes, without, need), with)
          << "round " << round << " job " << d.job;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Property, StartedJobsFitTheFreePool) {
  Rng rng(77);
  for (int round = 0; round < 300; ++round) {
    const QueueSnapshot s = random_snapshot(rng);
    const PassResult pr = easy_backfill(s);
    Nodes used = 0;
    for (const auto& d : pr.starts) {
      used += d.nodes;
      const auto it = std::find_if(s.waiting.begin(), s.waiting.end(),
                                   [&](const WaitingJob& w) { return w.id == d.job; });
      ASSERT_NE(it, s.waiting.end());
      EXPECT_GE(d.nodes, it->min_nodes);
      EXPECT_LE(d.nodes, it->max_nodes);
    }
    EXPECT_LE(used, s.free);
  }
}

TEST(Property, ConservationOnRandomWorkloads) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    SyntheticTraceConfig tc;
    tc.jobs = 200;
    tc.capacity = 48;
    tc.min_size = 1;
    tc.seed = seed;
    WorkloadConfig wc;
    wc.rng_seed = seed;
    wc.on_demand_fraction = 0.2;
    wc.rigid_fraction = 0.4;
    wc.malleable_fraction = 0.4;
    wc.notice_mix = parse_notice_mix("W" + std::to_string(1 + seed % 5));
    const auto jobs = synthetic_workload(tc, wc);
    NodeSeconds work = 0;
    for (const auto& j : jobs) work += j.actual_work;
    SystemConfig sys;
    sys.capacity = 48;
    sys.mtbf = 3600;
    sys.checkpoint_cost_small = 60;
    EngineOptions opts;
    opts.paranoid_ledger = true;
    for (auto name : kMechanismNames) {
      const auto r = simulate(jobs, sys, parse_mechanism(name), opts);
      const auto& t = r.record.totals;
      EXPECT_EQ(t.useful, work) << name << " seed " << seed;
      EXPECT_EQ(t.accounted(), t.allocated) << name << " seed " << seed;
      const NodeSeconds span = r.record.horizon_end - r.record.horizon_start;
      EXPECT_LE(t.allocated, sys.capacity * span);
      for (const auto& j : r.record.jobs) EXPECT_GE(j.finish, j.first_submit);
    }
  }
}

TEST(Property, EventLogCsvRoundTrip) {
  SyntheticTraceConfig tc;
  tc.jobs = 120;
  tc.capacity = 32;
  WorkloadConfig wc;
  const auto jobs = synthetic_workload(tc, wc);
  SystemConfig sys;
  sys.capacity = 32;
  const auto r = simulate(jobs, sys, parse_mechanism("CUP&SPAA"));
  std::stringstream ss;
  r.log.write_csv(ss);
  EXPECT_EQ(EventLog::read_csv(ss), r.log);
}

TEST(Property, EventTimesNeverDecrease) {
  SyntheticTraceConfig tc;
  tc.jobs = 200;
  tc.capacity = 32;
  WorkloadConfig wc;
  const auto jobs = synthetic_workload(tc, wc);
  SystemConfig sys;
  sys.capacity = 32;
  for (auto name : kMechanismNames) {
    const auto r = simulate(jobs, sys, parse_mechanism(name));
    Time last = 0;
    for (const auto& rec : r.log.records()) {
      EXPECT_GE(rec.time, last);
      last = rec.time;
    }
  }
}
