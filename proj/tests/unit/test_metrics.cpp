#include <gtest/gtest.h>

#include <sstream>

#include "hybridsim/engine.hpp"
#include "hybridsim/metrics.hpp"

using namespace hybridsim;

namespace {

JobOutcome job(JobId id, JobKind kind, Time submit, Time finish, int preemptions = 0,
               bool instant = false) {
  JobOutcome j;
  j.id = id;
  j.kind = kind;
  j.first_submit = submit;
  j.finish = finish;
  j.preemptions = preemptions;
  j.instant = instant;
  return j;
}

RunRecord toy_run() {
  RunRecord r;
  r.capacity = 2;
  r.horizon_start = 0;
  r.horizon_end = 10;
  r.jobs = {job(1, JobKind::Rigid, 0, 5)};
  r.totals.useful = 5;
  r.totals.allocated = 5;
  return r;
}

}  // namespace

TEST(Metrics, Turnaround) {
  EXPECT_EQ(turnaround(job(1, JobKind::Rigid, 0, 100)), 100);
  EXPECT_EQ(turnaround(job(1, JobKind::Rigid, 0, 500, 1)), 500);
}

TEST(Metrics, AverageByKind) {
  const std::vector<JobOutcome> jobs = {job(1, JobKind::Rigid, 0, 100),
                                        job(2, JobKind::Malleable, 10, 30),
                                        job(3, JobKind::Rigid, 0, 300)};
  EXPECT_DOUBLE_EQ(*average_turnaround(jobs), 140.0);
  EXPECT_DOUBLE_EQ(*average_turnaround(jobs, JobKind::Rigid), 200.0);
  EXPECT_DOUBLE_EQ(*average_turnaround(jobs, JobKind::Malleable), 20.0);
  EXPECT_FALSE(average_turnaround(jobs, JobKind::OnDemand));
}

TEST(Metrics, InstantStartRate) {
  EXPECT_FALSE(instant_start_rate({job(1, JobKind::Rigid, 0, 1)}));
  EXPECT_DOUBLE_EQ(*instant_start_rate({job(1, JobKind::OnDemand, 0, 1, 0, true),
                                        job(2, JobKind::OnDemand, 0, 1, 0, true)}),
                   1.0);
  EXPECT_DOUBLE_EQ(*instant_start_rate({job(1, JobKind::OnDemand, 0, 1, 0, true),
                                        job(2, JobKind::OnDemand, 0, 1, 0, false)}),
                   0.5);
}

TEST(Metrics, PreemptionRatioCountsJobsOnce) {
  const std::vector<JobOutcome> jobs = {job(1, JobKind::Rigid, 0, 1, 2),
                                        job(2, JobKind::Rigid, 0, 1, 0),
                                        job(3, JobKind::Malleable, 0, 1, 0)};
  EXPECT_DOUBLE_EQ(preemption_ratio(jobs, JobKind::Rigid), 0.5);
  EXPECT_DOUBLE_EQ(preemption_ratio(jobs, JobKind::Malleable), 0.0);
  EXPECT_DOUBLE_EQ(preemption_ratio({}, JobKind::Malleable), 0.0);
}

TEST(Metrics, UtilizationToy) {
  SystemConfig sys;
  sys.capacity = 2;
  EXPECT_DOUBLE_EQ(*system_utilization(toy_run(), sys), 0.25);
}

TEST(Metrics, UtilizationFullMachine) {
  RunRecord r = toy_run();
  r.totals.useful = r.totals.allocated = 20;
  SystemConfig sys;
  sys.capacity = 2;
  EXPECT_DOUBLE_EQ(*system_utilization(r, sys), 1.0);
}

TEST(Metrics, UtilizationAbsentOverEmptyHorizon) {
  RunRecord r;
  r.capacity = 4;
  EXPECT_FALSE(system_utilization(r, SystemConfig{}));
}

TEST(Metrics, UtilizationToggles) {
  RunRecord r = toy_run();
  r.totals.setup = 2;
  r.totals.checkpoint_writes = 3;
  r.totals.allocated = 10;
  SystemConfig sys;
  sys.capacity = 2;
  EXPECT_DOUBLE_EQ(*system_utilization(r, sys), 0.25);
  sys.setup_counts_as_waste = false;
  EXPECT_DOUBLE_EQ(*system_utilization(r, sys), 0.35);
  sys.checkpoint_counts_as_waste = false;
  EXPECT_DOUBLE_EQ(*system_utilization(r, sys), 0.5);
}

TEST(Metrics, ReportIdleAndWaste) {
  RunRecord r = toy_run();
  r.totals.lost_compute = 1;
  r.totals.allocated = 6;
  const auto m = compute_metrics(r, SystemConfig{}, "N&PAA");
  EXPECT_EQ(m.idle, 20 - 6);
  EXPECT_DOUBLE_EQ(m.waste_fraction, 1.0 / 20.0);
  EXPECT_DOUBLE_EQ(m.idle_fraction, 14.0 / 20.0);
  EXPECT_EQ(m.jobs, 1u);
  EXPECT_EQ(m.rigid_jobs, 1u);
}

TEST(Metrics, ShrinkCoversDeficitOnlyUnderSpaa) {
  JobSpec m;
  m.id = 1;
  m.kind = JobKind::Malleable;
  m.size = m.n_max = 10;
  m.n_min = 2;
  m.actual_work = 5000;
  m.runtime_estimate = 600;
  JobSpec od;
  od.id = 2;
  od.submit_time = 100;
  od.kind = JobKind::OnDemand;
  od.size = od.n_min = od.n_max = 4;
  od.actual_work = 200;
  od.runtime_estimate = 50;
  od.notice = NoticeProfile{};
  od.notice->actual_arrival = od.notice->estimated_arrival = 100;
  od.notice->estimated_size = 4;
  SystemConfig sys;
  sys.capacity = 10;
  const auto spaa = compute_metrics(simulate({m, od}, sys, parse_mechanism("N&SPAA")).record,
                                    sys, "N&SPAA");
  const auto paa = compute_metrics(simulate({m, od}, sys, parse_mechanism("N&PAA")).record,
                                   sys, "N&PAA");
  EXPECT_EQ(spaa.preemption_ratio_malleable, 0.0);
  EXPECT_GT(paa.preemption_ratio_malleable, 0.0);
  EXPECT_EQ(spaa.shrink_events, 1u);
}

TEST(Metrics, TurnaroundFromLogMatchesRecord) {
  EventLog log;
  log.event(0, EventClass::JobSubmit, 1, 2);
  log.event(5, EventClass::OnDemandArrival, 2, 1);
  log.action(9, Action::Kill, 1, 2);
  log.event(9, EventClass::JobSubmit, 1, 2);  // resubmission keeps the first time
  log.event(20, EventClass::JobFinish, 2, 1);
  log.event(50, EventClass::JobFinish, 1, 2);
  std::vector<JobSpec> jobs(2);
  jobs[0].id = 1;
  jobs[1].id = 2;
  jobs[1].kind = JobKind::OnDemand;
  const auto t = turnaround_from_log(log, jobs);
  EXPECT_DOUBLE_EQ(*t.overall, (50.0 + 15.0) / 2);
  EXPECT_DOUBLE_EQ(*t.rigid, 50.0);
  EXPECT_DOUBLE_EQ(*t.on_demand, 15.0);
  EXPECT_FALSE(t.malleable);
}

TEST(Metrics, LatencyPercentiles) {
  std::vector<double> xs;
  for (int i = 1; i <= 100; ++i) xs.push_back(i);
  const auto s = summarize_latency(xs);
  EXPECT_EQ(s.samples, 100u);
  EXPECT_DOUBLE_EQ(s.p50_ms, 50.0);
  EXPECT_DOUBLE_EQ(s.p99_ms, 99.0);
  EXPECT_DOUBLE_EQ(s.max_ms, 100.0);
  EXPECT_EQ(summarize_latency({}).samples, 0u);
}

TEST(Metrics, OutputsCarryTheHeadlineColumns) {
  SystemConfig sys;
  sys.capacity = 2;
  const auto m = compute_metrics(toy_run(), sys, "FCFS-EASY");
  std::ostringstream csv;
  write_csv(csv, m);
  const std::string text = csv.str();
  for (const char* col : {"avg_turnaround", "system_utilization", "instant_start_rate"}) {
    EXPECT_NE(text.find(col), std::string::npos) << col;
  }
  const auto j = to_json(m);
  EXPECT_EQ(j.at("mechanism"), "FCFS-EASY");
  EXPECT_TRUE(j.at("instant_start_rate").is_null());
  EXPECT_DOUBLE_EQ(j.at("system_utilization").get<double>(), 0.25);
}

TEST(Metrics, NumberFormatting) {
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(format_number(std::nullopt), "");
  EXPECT_EQ(format_number(3.0), "3");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(x)), x);
}
