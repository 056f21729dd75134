// Acceptance run: prints one PASS/FAIL line per criterion, with details
// indented below it. Exit status is 0 only if every criterion passes.
//
//   hybridsim_acceptance [runs.csv]
//
// The optional argument receives the per-run metrics of the synthetic sweep.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hybridsim/engine.hpp"
#include "hybridsim/metrics.hpp"
#include "hybridsim/oracle.hpp"
#include "hybridsim/policy.hpp"
#include "hybridsim/random.hpp"
#include "hybridsim/sweep.hpp"
#include "hybridsim/synth.hpp"

using namespace hybridsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  std::string id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void note(std::string s) { details.push_back(std::move(s)); }
  void fail(std::string s) {
    pass = false;
    details.push_back("violation: " + std::move(s));
  }
};

std::vector<Verdict> verdicts;

void report(const Verdict& v) {
  std::cout << (v.pass ? "PASS " : "FAIL ") << v.id << "  " << v.title << '\n';
  for (const auto& d : v.details) std::cout << "      " << d << '\n';
  std::cout.flush();
  verdicts.push_back(v);
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec + 2, x);
  return buf;
}

std::vector<std::string> six() { return {kMechanismNames.begin(), kMechanismNames.end()}; }

std::vector<std::string> seven() {
  auto v = six();
  v.emplace_back(kBaselineName);
  return v;
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence

void oracle_equivalence() {
  Verdict v{"1", "engine matches the brute-force oracle on tiny instances"};
  const auto t0 = Clock::now();
  constexpr std::uint64_t kSeeds = 100;
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  for (const auto& name : seven()) {
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      const TinyInstance inst = random_tiny_instance(seed);
      MechanismConfig mech = parse_mechanism(name);
      mech.warning_duration = inst.warning_duration;
      ++runs;
      try {
        const OracleResult want = oracle_run(inst, mech);
        EngineOptions opts;
        opts.paranoid_ledger = true;
        const RunResult got = simulate(inst.jobs, inst.system, mech, opts);
        const auto diff = first_difference(got.log, want.log);
        const bool metrics_equal =
            got.record == want.record &&
            metric_values(compute_metrics(got.record, inst.system, name)) ==
                metric_values(compute_metrics(want.record, inst.system, name));
        if (diff >= 0 || !metrics_equal) {
          ++mismatches;
          if (mismatches <= 5) {
            v.fail(name + " seed " + std::to_string(seed) +
                   (diff >= 0 ? ": logs differ at record " + std::to_string(diff) : ": metrics differ"));
          }
        }
      } catch (const std::exception& e) {
        ++mismatches;
        if (mismatches <= 5) v.fail(name + " seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  const double secs = seconds_since(t0);
  v.note(std::to_string(runs) + " runs, " + std::to_string(mismatches) + " mismatches, " +
         fmt(secs, 2) + " s");
  if (secs >= 60.0) v.fail("took longer than one minute");
  report(v);
}

// ---------------------------------------------------------------------------
// Synthetic sweep shared by criteria 2-4

constexpr int kTraces = 10;
const std::vector<std::string> kMixes = {"W1", "W2", "W3", "W4", "W5"};
constexpr const char* kDefaultMix = "W5";

using RunKey = std::tuple<std::string, double, std::string>;  // mix, checkpoint scale, mechanism

struct Sweep {
  std::map<RunKey, std::vector<MetricsReport>> reports;  // one per trace, in seed order
  std::vector<SweepRun> rows;
  std::vector<std::string> failures;
  std::vector<std::string> conservation;
  double od_share_max = 0.0;
  std::size_t jobs_min = SIZE_MAX;
  std::size_t jobs_max = 0;
  double seconds = 0.0;
};

SystemConfig sweep_system(double scale) {
  SystemConfig sys;
  sys.capacity = 512;
  sys.checkpoint_scale = scale;
  return sys;
}

std::vector<JobSpec> sweep_workload(int seed, const std::string& mix) {
  SyntheticTraceConfig tc;
  tc.seed = static_cast<std::uint64_t>(seed);
  tc.capacity = 512;
  WorkloadConfig wc;
  wc.rng_seed = static_cast<std::uint64_t>(seed);
  wc.notice_mix = parse_notice_mix(mix);
  return synthetic_workload(tc, wc);
}

// Conservation checks on one finished run, independent of the engine's own.
void check_conservation(const std::vector<JobSpec>& jobs, const RunResult& r,
                        const MetricsReport& m, const std::string& label,
                        std::vector<std::string>& out) {
  const NodeSecondTotals& t = r.record.totals;
  NodeSeconds work = 0;
  for (const auto& j : jobs) work += j.actual_work;
  if (t.useful != work) {
    out.push_back(label + ": useful " + std::to_string(t.useful) + " != submitted work " +
                  std::to_string(work));
  }
  if (t.accounted() != t.allocated) {
    out.push_back(label + ": allocated node-seconds not fully accounted");
  }
  const double total = static_cast<double>(r.record.capacity) *
                       static_cast<double>(r.record.horizon_end - r.record.horizon_start);
  const double sum = static_cast<double>(m.useful + m.lost_compute + m.setup_replay +
                                         m.checkpoint_writes + m.drain_occupancy +
                                         m.completion_slack + m.idle);
  if (m.idle < 0 || std::abs(sum - total) > 1e-9 * std::max(1.0, total)) {
    out.push_back(label + ": useful + waste + idle != capacity x horizon");
  }
}

Sweep run_synthetic_sweep() {
  Sweep s;
  const auto t0 = Clock::now();
  EngineOptions opts;
  opts.paranoid_ledger = true;
  auto one = [&](const std::vector<JobSpec>& jobs, int seed, const std::string& mix, double scale,
                 const std::string& name) {
    const SystemConfig sys = sweep_system(scale);
    const std::string label =
        name + " " + mix + " scale " + fmt(scale, 2) + " seed " + std::to_string(seed);
    SweepRun row{name, mix, "scale=" + fmt(scale, 2), static_cast<std::uint64_t>(seed), {}, {}};
    try {
      const RunResult r = simulate(jobs, sys, parse_mechanism(name), opts);
      MetricsReport m = compute_metrics(r.record, sys, name);
      check_conservation(jobs, r, m, label, s.conservation);
      row.metrics = metric_values(m);
      s.reports[{mix, scale, name}].push_back(std::move(m));
    } catch (const std::exception& e) {
      row.error = e.what();
      s.failures.push_back(label + ": " + e.what());
    }
    s.rows.push_back(std::move(row));
  };
  for (int seed = 1; seed <= kTraces; ++seed) {
    for (const auto& mix : kMixes) {
      const auto jobs = sweep_workload(seed, mix);
      std::size_t od = 0;
      for (const auto& j : jobs) od += j.kind == JobKind::OnDemand;
      s.od_share_max = std::max(s.od_share_max, static_cast<double>(od) / jobs.size());
      s.jobs_min = std::min(s.jobs_min, jobs.size());
      s.jobs_max = std::max(s.jobs_max, jobs.size());
      for (const auto& name : seven()) one(jobs, seed, mix, 1.0, name);
      if (mix == kDefaultMix) {
        for (const auto& name : six()) one(jobs, seed, mix, 0.5, name);
      }
    }
  }
  s.seconds = seconds_since(t0);
  return s;
}

// ---------------------------------------------------------------------------
// 2. Conservation

void conservation(const Sweep& s) {
  Verdict v{"2", "node-second, ledger and work conservation on every run"};
  v.note(std::to_string(s.rows.size()) +
         " synthetic runs with the ledger audited after every mutation");
  for (const auto& f : s.failures) v.fail(f);
  for (const auto& c : s.conservation) v.fail(c);
  report(v);
}

// ---------------------------------------------------------------------------
// 3 and 4. Properties over the ten traces

using Getter = std::function<std::optional<double>(const MetricsReport&)>;

const Getter turnaround = [](const MetricsReport& m) { return m.avg_turnaround; };
const Getter turnaround_rigid = [](const MetricsReport& m) { return m.avg_turnaround_rigid; };
const Getter turnaround_malleable = [](const MetricsReport& m) {
  return m.avg_turnaround_malleable;
};
const Getter utilization = [](const MetricsReport& m) { return m.system_utilization; };
const Getter instant = [](const MetricsReport& m) { return m.instant_start_rate; };
const Getter preempt_rigid = [](const MetricsReport& m) {
  return std::optional<double>(m.preemption_ratio_rigid);
};
const Getter preempt_malleable = [](const MetricsReport& m) {
  return std::optional<double>(m.preemption_ratio_malleable);
};

class Table {
 public:
  explicit Table(const Sweep& s) : s_(s) {}

  const std::vector<MetricsReport>* runs(const RunKey& k) const {
    auto it = s_.reports.find(k);
    if (it == s_.reports.end() || it->second.size() != static_cast<std::size_t>(kTraces)) {
      return nullptr;
    }
    return &it->second;
  }

  std::optional<double> value(const RunKey& k, int trace, const Getter& g) const {
    const auto* r = runs(k);
    if (!r) return std::nullopt;
    return g((*r)[static_cast<std::size_t>(trace)]);
  }

  std::optional<double> mean(const RunKey& k, const Getter& g) const {
    const auto* r = runs(k);
    if (!r) return std::nullopt;
    double sum = 0.0;
    for (const auto& m : *r) {
      const auto x = g(m);
      if (!x) return std::nullopt;
      sum += *x;
    }
    return sum / static_cast<double>(r->size());
  }

 private:
  const Sweep& s_;
};

std::string key_label(const RunKey& k) {
  const auto& [mix, scale, name] = k;
  std::string s = name + "/" + mix;
  if (scale != 1.0) s += "/scale " + fmt(scale, 2);
  return s;
}

enum class Cmp { Less, LessEq, Greater, GreaterEq };

bool holds(double a, double b, Cmp c) {
  switch (c) {
    case Cmp::Less: return a < b;
    case Cmp::LessEq: return a <= b;
    case Cmp::Greater: return a > b;
    case Cmp::GreaterEq: return a >= b;
  }
  return false;
}

const char* symbol(Cmp c) {
  switch (c) {
    case Cmp::Less: return "<";
    case Cmp::LessEq: return "<=";
    case Cmp::Greater: return ">";
    case Cmp::GreaterEq: return ">=";
  }
  return "?";
}

// Checks metric(a) CMP metric(b) on the ten-trace mean; trace-level
// violations are noted but do not fail the criterion.
void compare(Verdict& v, const Table& t, const std::string& metric, const Getter& g,
             const RunKey& a, Cmp c, const RunKey& b) {
  const auto ma = t.mean(a, g);
  const auto mb = t.mean(b, g);
  const std::string what = metric + " " + key_label(a) + " " + symbol(c) + " " + key_label(b);
  if (!ma || !mb) {
    v.fail(what + ": missing runs");
    return;
  }
  std::string line = what + ": " + fmt(*ma) + " vs " + fmt(*mb);
  std::vector<int> bad;
  for (int i = 0; i < kTraces; ++i) {
    const auto x = t.value(a, i, g);
    const auto y = t.value(b, i, g);
    if (x && y && !holds(*x, *y, c)) bad.push_back(i + 1);
  }
  if (!bad.empty()) {
    line += "; trace-level violations at seeds";
    for (int s : bad) line += " " + std::to_string(s);
  }
  if (holds(*ma, *mb, c)) {
    v.note(line);
  } else {
    v.fail(line);
  }
}

RunKey key(const std::string& name, const std::string& mix = kDefaultMix, double scale = 1.0) {
  return {mix, scale, name};
}

void instant_start(const Table& t, const Sweep& s) {
  Verdict v{"3", "instant start rate >= 0.95 for every mechanism, < 0.60 for FCFS/EASY"};
  v.note("traces: " + std::to_string(kTraces) + " x " + std::to_string(s.jobs_min) + "-" +
         std::to_string(s.jobs_max) + " jobs on 512 nodes, on-demand share at most " +
         fmt(s.od_share_max, 3) + ", sweep took " + fmt(s.seconds, 3) + " s");
  if (s.od_share_max > 0.15) v.fail("on-demand share above 15% of jobs");
  if (s.seconds >= 300.0) v.fail("sweep took longer than five minutes");
  for (const auto& name : seven()) {
    const auto rate = t.mean(key(name), instant);
    if (!rate) {
      v.fail(name + ": no instant start rate");
      continue;
    }
    const bool base = name == kBaselineName;
    const std::string line = name + " " + fmt(*rate) + (base ? " (need < 0.60)" : " (need >= 0.95)");
    if (base ? *rate < 0.60 : *rate >= 0.95) {
      v.note(line);
    } else {
      v.fail(line);
    }
  }
  report(v);
}

void ordering(const Table& t) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"N&PAA", "N&SPAA"}, {"CUA&PAA", "CUA&SPAA"}, {"CUP&PAA", "CUP&SPAA"}};
  {
    Verdict v{"4a", "N&PAA has the highest turnaround and lowest utilization of the six"};
    for (const auto& other : six()) {
      if (other == "N&PAA") continue;
      compare(v, t, "turnaround", turnaround, key("N&PAA"), Cmp::Greater, key(other));
      compare(v, t, "utilization", utilization, key("N&PAA"), Cmp::Less, key(other));
    }
    report(v);
  }
  {
    Verdict v{"4b", "SPAA lowers malleable preemption and keeps utilization vs PAA"};
    for (const auto& [paa, spaa] : pairs) {
      compare(v, t, "malleable preemption", preempt_malleable, key(spaa), Cmp::Less, key(paa));
      compare(v, t, "utilization", utilization, key(spaa), Cmp::GreaterEq, key(paa));
    }
    report(v);
  }
  {
    Verdict v{"4c", "PAA turnaround <= SPAA turnaround under CUA and CUP"};
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      compare(v, t, "turnaround", turnaround, key(pairs[i].first), Cmp::LessEq,
              key(pairs[i].second));
    }
    report(v);
  }
  {
    Verdict v{"4d", "CUA beats CUP on turnaround and utilization on W5"};
    for (const char* x : {"PAA", "SPAA"}) {
      const std::string cua = std::string("CUA&") + x;
      const std::string cup = std::string("CUP&") + x;
      compare(v, t, "turnaround", turnaround, key(cua, "W5"), Cmp::LessEq, key(cup, "W5"));
      compare(v, t, "utilization", utilization, key(cua, "W5"), Cmp::GreaterEq, key(cup, "W5"));
    }
    report(v);
  }
  {
    Verdict v{"4e", "malleable turnaround < rigid turnaround under CUA and CUP"};
    for (const auto& name : six()) {
      if (name.rfind("N&", 0) == 0) continue;
      const auto m = t.mean(key(name), turnaround_malleable);
      const auto r = t.mean(key(name), turnaround_rigid);
      if (!m || !r) {
        v.fail(name + ": missing turnaround");
        continue;
      }
      const Getter diff = [](const MetricsReport& rep) -> std::optional<double> {
        if (!rep.avg_turnaround_malleable || !rep.avg_turnaround_rigid) return std::nullopt;
        return *rep.avg_turnaround_malleable - *rep.avg_turnaround_rigid;
      };
      std::string line = name + ": malleable " + fmt(*m) + " vs rigid " + fmt(*r);
      std::vector<int> bad;
      for (int i = 0; i < kTraces; ++i) {
        const auto d = t.value(key(name), i, diff);
        if (d && !(*d < 0)) bad.push_back(i + 1);
      }
      if (!bad.empty()) {
        line += "; trace-level violations at seeds";
        for (int s : bad) line += " " + std::to_string(s);
      }
      if (*m < *r) {
        v.note(line);
      } else {
        v.fail(line);
      }
    }
    report(v);
  }
  {
    Verdict v{"4f", "malleable preemption ratio > rigid preemption ratio"};
    for (const auto& name : six()) {
      const auto m = t.mean(key(name), preempt_malleable);
      const auto r = t.mean(key(name), preempt_rigid);
      std::string line = name + ": malleable " + fmt(*m) + " vs rigid " + fmt(*r);
      std::vector<int> bad;
      for (int i = 0; i < kTraces; ++i) {
        if (!(*t.value(key(name), i, preempt_malleable) > *t.value(key(name), i, preempt_rigid))) {
          bad.push_back(i + 1);
        }
      }
      if (!bad.empty()) {
        line += "; trace-level violations at seeds";
        for (int s : bad) line += " " + std::to_string(s);
      }
      if (*m > *r) {
        v.note(line);
      } else {
        v.fail(line);
      }
    }
    report(v);
  }
  {
    Verdict v{"4g", "CUP on W2 keeps utilization and turnaround vs W1"};
    for (const char* name : {"CUP&PAA", "CUP&SPAA"}) {
      compare(v, t, "utilization", utilization, key(name, "W2"), Cmp::GreaterEq, key(name, "W1"));
      compare(v, t, "turnaround", turnaround, key(name, "W2"), Cmp::LessEq, key(name, "W1"));
    }
    report(v);
  }
  {
    Verdict v{"4h", "CUA has its lowest turnaround on W4"};
    for (const char* name : {"CUA&PAA", "CUA&SPAA"}) {
      for (const auto& mix : kMixes) {
        if (mix == "W4") continue;
        compare(v, t, "turnaround", turnaround, key(name, "W4"), Cmp::LessEq, key(name, mix));
      }
    }
    report(v);
  }
  {
    Verdict v{"4i", "checkpoint scale 0.5 keeps rigid turnaround and utilization vs 1.0"};
    for (const auto& name : six()) {
      compare(v, t, "rigid turnaround", turnaround_rigid, key(name, kDefaultMix, 0.5), Cmp::LessEq,
              key(name, kDefaultMix, 1.0));
      compare(v, t, "utilization", utilization, key(name, kDefaultMix, 0.5), Cmp::GreaterEq,
              key(name, kDefaultMix, 1.0));
    }
    report(v);
  }
}

// ---------------------------------------------------------------------------
// 5. Arrival decision latency

void decision_latency() {
  Verdict v{"5", "p99 arrival decision latency < 10 ms with >= 1,000 queued jobs on 4,392 nodes"};
  const auto t0 = Clock::now();
  // An overloaded trace so that the queue stays long for most of the run.
  SyntheticTraceConfig tc;
  tc.capacity = 4392;
  tc.jobs = 8000;
  tc.offered_load = 2.0;
  tc.seed = 7;
  WorkloadConfig wc;
  wc.rng_seed = 7;
  const auto jobs = synthetic_workload(tc, wc);
  SystemConfig sys;
  sys.capacity = 4392;
  EngineOptions opts;
  opts.measure_latency = true;
  std::vector<double> ms;
  std::size_t all = 0;
  for (const char* name : {"N&PAA", "N&SPAA", "CUP&SPAA"}) {
    const RunResult r = simulate(jobs, sys, parse_mechanism(name), opts);
    all += r.arrival_latency.size();
    for (const auto& s : r.arrival_latency) {
      if (s.queued >= 1000) ms.push_back(s.ms);
    }
  }
  const double secs = seconds_since(t0);
  const LatencyStats st = summarize_latency(ms);
  v.note(std::to_string(st.samples) + " of " + std::to_string(all) +
         " arrival decisions taken with >= 1,000 queued jobs; p50 " + fmt(st.p50_ms, 3) +
         " ms, p99 " + fmt(st.p99_ms, 3) + " ms, max " + fmt(st.max_ms, 3) + " ms; " +
         fmt(secs, 3) + " s");
  if (st.samples < 100) v.fail("fewer than 100 qualifying samples");
  if (st.p99_ms >= 10.0) v.fail("p99 at or above 10 ms");
  if (secs >= 120.0) v.fail("took longer than two minutes");
  report(v);
}

// ---------------------------------------------------------------------------
// 6. EASY safety

struct RandomQueue {
  QueueSnapshot snap;
  Nodes capacity = 0;
};

RandomQueue random_queue(std::uint64_t seed) {
  Rng rng(seed);
  RandomQueue q;
  q.capacity = rng.uniform_int(4, 64);
  q.snap.now = rng.uniform_int(0, 1000);
  Nodes left = q.capacity;
  const int nres = static_cast<int>(rng.uniform_int(0, 2));
  for (int i = 0; i < nres && left > 1; ++i) {
    const Nodes idle = rng.uniform_int(1, std::max<Nodes>(1, left / 4));
    q.snap.reservations.push_back({100 + i, rng.uniform_int(0, q.snap.now), idle});
    left -= idle;
  }
  while (left > 0 && rng.bernoulli(0.8)) {
    const Nodes n = rng.uniform_int(1, left);
    q.snap.releases.push_back({q.snap.now + rng.uniform_int(1, 500), n});
    left -= n;
  }
  q.snap.free = left;
  const int nwait = static_cast<int>(rng.uniform_int(1, 12));
  for (int i = 0; i < nwait; ++i) {
    WaitingJob w;
    w.id = i + 1;
    const double u = rng.uniform01();
    w.kind = u < 0.5 ? JobKind::Rigid : u < 0.85 ? JobKind::Malleable : JobKind::OnDemand;
    w.first_submit = rng.uniform_int(0, q.snap.now);
    const Nodes size = rng.uniform_int(1, q.capacity);
    if (w.kind == JobKind::Malleable) {
      w.max_nodes = size;
      w.min_nodes = rng.uniform_int(1, size);
      w.setup = rng.uniform_int(0, 20);
      w.est_work = rng.uniform_int(1, 400) * size;
    } else {
      w.min_nodes = w.max_nodes = size;
      w.fixed_duration = rng.uniform_int(1, 600);
      if (w.kind == JobKind::OnDemand && rng.bernoulli(0.5)) {
        w.pinned = true;
        w.pin_time = rng.uniform_int(0, q.snap.now);
      }
    }
    q.snap.waiting.push_back(w);
  }
  return q;
}

// Earliest second at which `need` nodes are free, stepping the clock one
// second at a time. `running` holds (end, nodes) of everything on free-pool
// nodes at `now`; `free` is what is left over.
Time step_head_start(Time now, Nodes free, const std::vector<std::pair<Time, Nodes>>& running,
                     Nodes need) {
  Time horizon = now;
  for (const auto& r : running) horizon = std::max(horizon, r.first);
  for (Time t = now; t <= horizon; ++t) {
    Nodes avail = free;
    for (const auto& r : running) {
      if (r.first <= t) avail += r.second;
    }
    if (avail >= need) return t;
  }
  return kNever;
}

void easy_safety() {
  Verdict v{"6", "no backfill decision delays the head reservation"};
  constexpr std::uint64_t kCases = 200;
  std::size_t backfills = 0;
  std::size_t with_head = 0;
  for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
    const RandomQueue q = random_queue(seed);
    const PassResult pr = easy_backfill(q.snap);
    if (!pr.head) continue;
    ++with_head;
    std::map<JobId, WaitingJob> by_id;
    for (const auto& w : q.snap.waiting) by_id[w.id] = w;
    const WaitingJob& head = by_id.at(pr.head->job);

    // Everything running on free-pool nodes after the pass.
    std::vector<std::pair<Time, Nodes>> running;
    std::vector<JobId> owner;  // parallel to running; 0 for already-running jobs
    Nodes free = q.snap.free;
    for (const auto& r : q.snap.releases) {
      running.emplace_back(r.est_end, r.nodes);
      owner.push_back(0);
    }
    for (const auto& d : pr.starts) {
      if (d.on_reservation) continue;
      running.emplace_back(q.snap.now + by_id.at(d.job).duration(d.nodes), d.nodes);
      owner.push_back(d.job);
      free -= d.nodes;
    }
    const Time with_all = step_head_start(q.snap.now, free, running, head.min_nodes);
    if (with_all != pr.head->start) {
      v.fail("seed " + std::to_string(seed) + ": head start " + std::to_string(pr.head->start) +
             " but the schedule starts it at " + std::to_string(with_all));
    }
    for (const auto& d : pr.starts) {
      if (!d.backfilled) continue;
      ++backfills;
      auto others = running;
      Nodes f = free;
      for (std::size_t i = 0; i < owner.size(); ++i) {
        if (owner[i] == d.job) {
          others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
          f += d.nodes;
          break;
        }
      }
      const Time without = step_head_start(q.snap.now, f, others, head.min_nodes);
      if (without != with_all) {
        v.fail("seed " + std::to_string(seed) + ": backfilling job " + std::to_string(d.job) +
               " moves the head from " + std::to_string(without) + " to " +
               std::to_string(with_all));
      }
    }
  }
  v.note(std::to_string(kCases) + " random queues, " + std::to_string(with_head) +
         " with a blocked head, " + std::to_string(backfills) + " backfill decisions re-simulated");
  if (backfills == 0) v.fail("no backfill decisions were exercised");
  report(v);
}

// ---------------------------------------------------------------------------
// 7. Determinism

std::string render(const RunResult& r, const SystemConfig& sys, const std::string& name) {
  std::ostringstream out;
  r.log.write_csv(out);
  out << to_json(compute_metrics(r.record, sys, name)).dump(2);
  write_csv(out, compute_metrics(r.record, sys, name));
  return out.str();
}

void determinism() {
  Verdict v{"7", "repeated runs give byte-identical event logs and reports"};
  const std::vector<std::tuple<std::string, std::string, int, double>> cases = {
      {"N&PAA", "W5", 1, 1.0}, {"CUP&SPAA", "W2", 2, 0.5}, {std::string(kBaselineName), "W4", 3, 1.0}};
  for (const auto& [name, mix, seed, scale] : cases) {
    const SystemConfig sys = sweep_system(scale);
    std::vector<std::string> out;
    for (int rep = 0; rep < 3; ++rep) {
      // regenerate the workload each time: generation is part of the run
      const auto jobs = sweep_workload(seed, mix);
      out.push_back(render(simulate(jobs, sys, parse_mechanism(name)), sys, name));
    }
    const bool same = out[0] == out[1] && out[1] == out[2];
    const std::string line = name + " " + mix + " seed " + std::to_string(seed) + ": " +
                             std::to_string(out[0].size()) + " bytes, 3 repetitions";
    if (same) {
      v.note(line + " identical");
    } else {
      v.fail(line + " differ");
    }
  }
  report(v);
}

}  // namespace

int main(int argc, char** argv) {
  oracle_equivalence();
  const Sweep sweep = run_synthetic_sweep();
  if (argc > 1) {
    std::ofstream out(argv[1], std::ios::binary);
    write_runs_csv(out, sweep.rows);
  }
  conservation(sweep);
  const Table table(sweep);
  instant_start(table, sweep);
  ordering(table);
  decision_latency();
  easy_safety();
  determinism();

  std::size_t failed = 0;
  for (const auto& v : verdicts) failed += !v.pass;
  std::cout << "\n" << verdicts.size() - failed << " of " << verdicts.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
