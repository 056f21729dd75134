#include <gtest/gtest.h>

#include "hybridsim/policy.hpp"

using namespace hybridsim;

namespace {

WaitingJob rigid(JobId id, Nodes n, Time dur, Time submit = 0) {
  WaitingJob w;
  w.id = id;
  w.min_nodes = w.max_nodes = n;
  w.fixed_duration = dur;
  w.first_submit = submit;
  return w;
}

std::vector<JobId> ids(const std::vector<WaitingJob>& v) {
  std::vector<JobId> out;
  for (const auto& w : v) out.push_back(w.id);
  return out;
}

}  // namespace

TEST(Order, BySubmitTime) {
  const auto o = fcfs_order({rigid(1, 1, 1, 5), rigid(2, 1, 1, 3), rigid(3, 1, 1, 9)});
  EXPECT_EQ(ids(o), (std::vector<JobId>{2, 1, 3}));
}

TEST(Order, FirstSubmitKeptAcrossPreemption) {
  // job 7 first submitted at 1 and requeued at 100 keeps its place
  const auto o = fcfs_order({rigid(4, 1, 1, 5), rigid(7, 1, 1, 1)});
  EXPECT_EQ(ids(o), (std::vector<JobId>{7, 4}));
}

TEST(Order, PinnedOnDemandFirst) {
  WaitingJob od = rigid(9, 1, 1, 50);
  od.kind = JobKind::OnDemand;
  od.pinned = true;
  od.pin_time = 50;
  const auto o = fcfs_order({rigid(1, 1, 1, 0), od, rigid(2, 1, 1, 1)});
  EXPECT_EQ(o.front().id, 9);
}

TEST(Order, IdBreaksTies) {
  const auto o = fcfs_order({rigid(5, 1, 1, 0), rigid(3, 1, 1, 0)});
  EXPECT_EQ(ids(o), (std::vector<JobId>{3, 5}));
}

TEST(Easy, EmptyQueue) {
  QueueSnapshot s;
  s.free = 4;
  const auto r = easy_backfill(s);
  EXPECT_TRUE(r.starts.empty());
  EXPECT_FALSE(r.head);
}

TEST(Easy, FittingJobStartsNow) {
  QueueSnapshot s;
  s.free = 4;
  s.waiting = {rigid(1, 3, 10)};
  const auto r = easy_backfill(s);
  ASSERT_EQ(r.starts.size(), 1u);
  EXPECT_EQ(r.starts[0], (StartDecision{1, 3, false, std::nullopt}));
}

TEST(Easy, ShortJobBackfillsBeforeShadow) {
  QueueSnapshot s;
  s.now = 0;
  s.free = 1;
  s.releases = {{10, 3}};
  s.waiting = {rigid(1, 4, 20, 0), rigid(2, 1, 8, 1)};
  const auto r = easy_backfill(s);
  ASSERT_TRUE(r.head);
  EXPECT_EQ(r.head->job, 1);
  EXPECT_EQ(r.head->start, 10);
  ASSERT_EQ(r.starts.size(), 1u);
  EXPECT_EQ(r.starts[0], (StartDecision{2, 1, true, std::nullopt}));
}

TEST(Easy, LongJobDoesNotBackfill) {
  QueueSnapshot s;
  s.free = 1;
  s.releases = {{10, 3}};
  s.waiting = {rigid(1, 4, 20, 0), rigid(2, 1, 12, 1)};
  const auto r = easy_backfill(s);
  EXPECT_TRUE(r.starts.empty());
  EXPECT_EQ(r.head->extra, 0);
}

TEST(Easy, LongJobUsesExtraNodes) {
  QueueSnapshot s;
  s.free = 2;
  s.releases = {{10, 3}};
  s.waiting = {rigid(1, 4, 20, 0), rigid(2, 1, 50, 1), rigid(3, 1, 50, 2)};
  const auto r = easy_backfill(s);
  ASSERT_EQ(r.head->extra, 1);
  ASSERT_EQ(r.starts.size(), 1u);
  EXPECT_EQ(r.starts[0].job, 2);
}

TEST(Easy, IdleReservedNodesTakeNonOnDemandJobs) {
  QueueSnapshot s;
  s.free = 0;
  s.releases = {{100, 4}};
  s.reservations = {{50, 0, 5}};
  WaitingJob od = rigid(4, 2, 10, 2);
  od.kind = JobKind::OnDemand;
  s.waiting = {rigid(1, 4, 20, 0), rigid(3, 4, 20, 1), od};
  const auto r = easy_backfill(s);
  ASSERT_EQ(r.starts.size(), 1u);
  EXPECT_EQ(r.starts[0], (StartDecision{3, 4, true, JobId{50}}));
}

TEST(Easy, MalleableTakesLargestFit) {
  QueueSnapshot s;
  s.free = 6;
  WaitingJob m;
  m.id = 1;
  m.kind = JobKind::Malleable;
  m.min_nodes = 2;
  m.max_nodes = 8;
  m.est_work = 80;
  s.waiting = {m};
  const auto r = easy_backfill(s);
  ASSERT_EQ(r.starts.size(), 1u);
  EXPECT_EQ(r.starts[0].nodes, 6);
}

TEST(Easy, ProjectedStartGroupsEqualEnds) {
  Nodes extra = -1;
  EXPECT_EQ(projected_start(0, {{5, 1}, {5, 2}, {9, 4}}, 0, 3, &extra), 5);
  EXPECT_EQ(extra, 0);
  EXPECT_EQ(projected_start(0, {{5, 1}}, 0, 3), kNever);
}
