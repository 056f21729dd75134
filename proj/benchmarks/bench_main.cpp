#include <benchmark/benchmark.h>

#include "hybridsim/engine.hpp"
#include "hybridsim/mechanisms.hpp"
#include "hybridsim/policy.hpp"
#include "hybridsim/random.hpp"
#include "hybridsim/synth.hpp"

using namespace hybridsim;

namespace {

constexpr Nodes kCapacity = 4392;

QueueSnapshot random_queue(std::size_t waiting, std::uint64_t seed) {
  Rng rng(seed);
  QueueSnapshot q;
  q.now = 1000;
  Nodes busy = 0;
  while (busy < kCapacity - 200) {
    const Nodes n = rng.uniform_int(1, 300);
    if (busy + n > kCapacity) break;
    q.releases.push_back({q.now + rng.uniform_int(1, 86400), n});
    busy += n;
  }
  q.free = kCapacity - busy;
  for (std::size_t i = 0; i < waiting; ++i) {
    WaitingJob w;
    w.id = static_cast<JobId>(i + 1);
    w.first_submit = static_cast<Time>(i);
    if (rng.bernoulli(0.5)) {
      w.kind = JobKind::Malleable;
      w.max_nodes = rng.uniform_int(2, 500);
      w.min_nodes = std::max<Nodes>(1, w.max_nodes / 4);
      w.setup = 60;
      w.est_work = w.max_nodes * rng.uniform_int(600, 36000);
    } else {
      w.min_nodes = w.max_nodes = rng.uniform_int(1, 1000);
      w.fixed_duration = rng.uniform_int(600, 86400);
    }
    q.waiting.push_back(w);
  }
  return q;
}

ArrivalState random_arrival(std::size_t running, std::uint64_t seed) {
  Rng rng(seed);
  ArrivalState s;
  s.free = 10;
  for (std::size_t i = 0; i < running; ++i) {
    Candidate c;
    c.id = static_cast<JobId>(i + 1);
    c.nodes = rng.uniform_int(2, 200);
    if (rng.bernoulli(0.5)) {
      c.kind = JobKind::Malleable;
      c.n_min = std::max<Nodes>(1, c.nodes / 4);
      c.overhead = preemption_overhead_malleable(c.nodes, 120, 60);
    } else {
      c.n_min = c.nodes;
      c.overhead = preemption_overhead_rigid(c.nodes, 5000, rng.uniform_int(0, 5000), 60);
    }
    s.candidates.push_back(c);
  }
  s.demand = 800;
  return s;
}

void BM_EasyBackfill(benchmark::State& st) {
  const QueueSnapshot q = random_queue(static_cast<std::size_t>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(easy_backfill(q));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_EasyBackfill)->RangeMultiplier(4)->Range(16, 4096);

void BM_PlanArrival(benchmark::State& st) {
  const ArrivalState s = random_arrival(static_cast<std::size_t>(st.range(0)), 5);
  const auto strategy = st.range(1) ? ArrivalStrategy::ShrinkThenPreempt : ArrivalStrategy::Preempt;
  for (auto _ : st) benchmark::DoNotOptimize(plan_arrival(strategy, s));
}
BENCHMARK(BM_PlanArrival)->ArgsProduct({{16, 128, 1024}, {0, 1}})->ArgNames({"running", "spaa"});

void BM_FullRun(benchmark::State& st) {
  static const char* const names[] = {"N&PAA", "N&SPAA", "CUA&PAA", "CUA&SPAA", "CUP&PAA",
                                      "CUP&SPAA", "FCFS-EASY"};
  const char* name = names[st.range(0)];
  SyntheticTraceConfig tc;
  tc.jobs = 2000;
  tc.capacity = 512;
  WorkloadConfig wc;
  wc.notice_mix = parse_notice_mix("W5");
  const auto jobs = synthetic_workload(tc, wc);
  SystemConfig sys;
  sys.capacity = 512;
  const MechanismConfig mech = parse_mechanism(name);
  st.SetLabel(name);
  for (auto _ : st) benchmark::DoNotOptimize(simulate(jobs, sys, mech));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(jobs.size()));
}
BENCHMARK(BM_FullRun)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
