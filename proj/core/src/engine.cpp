#include "hybridsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "hybridsim/checkpoint.hpp"
#include "hybridsim/cluster.hpp"
#include "hybridsim/mechanisms.hpp"
#include "hybridsim/policy.hpp"

namespace hybridsim {

namespace {

// On-demand jobs never checkpoint.
constexpr CheckpointPlan kNoCheckpoints{Time{1} << 50, 0};

enum class Phase { Pending, Waiting, Active, Draining, Finished };

struct Event {
  Time time;
  EventClass cls;
  JobId job;
  std::uint64_t seq;
  std::uint64_t epoch;

  bool operator>(const Event& o) const {
    return std::tie(time, cls, job, seq) > std::tie(o.time, o.cls, o.job, o.seq);
  }
};

struct JobRt {
  const JobSpec* spec = nullptr;
  Phase phase = Phase::Pending;
  Nodes nodes = 0;
  Nodes original = 0;
  Time seg_start = 0;
  std::uint64_t epoch = 0;
  CheckpointPlan ckpt;
  Time compute_total = 0;  // fixed-size jobs
  Time est_compute = 0;
  Time saved = 0;
  NodeSeconds est_work = 0;  // malleable
  NodeSeconds done = 0;
  Time acct = 0;
  JobId beneficiary = kNoJob;  // draining malleable
  JobId pledged_to = kNoJob;   // rigid awaiting its next checkpoint
  Time first_submit = 0;
  Time finish = -1;
  int preemptions = 0;
  int shrinks = 0;
  bool instant = false;
  bool arrived = false;
  bool pinned = false;
  Time pin_time = 0;
  std::tuple<int, Time, JobId> queue_key{};
  std::vector<JobId> lenders;
  NodeSeconds useful = 0;

  bool malleable() const { return spec->kind == JobKind::Malleable; }
  bool on_demand() const { return spec->kind == JobKind::OnDemand; }
  RigidTimeline timeline() const {
    return RigidTimeline(seg_start, spec->setup_time, compute_total - saved, ckpt);
  }
  RigidTimeline est_timeline(Time start) const {
    return RigidTimeline(start, spec->setup_time, std::max<Time>(0, est_compute - saved), ckpt);
  }
  Time setup_end() const { return seg_start + spec->setup_time; }
};

class Engine {
 public:
  Engine(const std::vector<JobSpec>& jobs, const SystemConfig& sys, const MechanismConfig& mech,
         const EngineOptions& opts)
      : sys_(sys), mech_(mech), opts_(opts), ledger_(sys.capacity) {
    sys_.validate();
    if (mech_.warning_duration < 1) throw std::invalid_argument("warning_duration must be >= 1 s");
    ledger_.set_paranoid(opts.paranoid_ledger);
    ledger_.set_audit_log(opts.ledger_audit);
    jobs_.reserve(jobs.size());
    for (const auto& spec : jobs) {
      validate(spec);
      if (spec.n_min > sys.capacity) {
        throw std::invalid_argument("job " + std::to_string(spec.id) +
                                    " needs more nodes than the system has");
      }
      if (index_.contains(spec.id)) {
        throw std::invalid_argument("duplicate job id " + std::to_string(spec.id));
      }
      index_[spec.id] = jobs_.size();
      JobRt rt;
      rt.spec = &spec;
      if (spec.kind == JobKind::Malleable) {
        rt.est_work = std::max<NodeSeconds>(
            (spec.runtime_estimate - spec.setup_time) * spec.n_max, spec.actual_work);
      } else {
        rt.compute_total = spec.compute_seconds();
        rt.est_compute =
            std::max<Time>(spec.runtime_estimate - spec.setup_time, rt.compute_total);
        rt.ckpt = spec.kind == JobKind::Rigid ? checkpoint_plan(spec.size, sys) : kNoCheckpoints;
      }
      jobs_.push_back(rt);
    }
  }

  RunResult run() {
    for (auto& j : jobs_) {
      const JobSpec& s = *j.spec;
      if (s.kind != JobKind::OnDemand || !mech_.enabled) {
        push(s.submit_time, EventClass::JobSubmit, s.id);
        continue;
      }
      push(s.submit_time, EventClass::OnDemandArrival, s.id);
      if (s.notice && s.notice->notice_time && *s.notice->notice_time < s.submit_time) {
        push(*s.notice->notice_time, EventClass::AdvanceNotice, s.id);
      }
    }
    result_.record.capacity = sys_.capacity;
    bool started = false;
    bool pass_pending = false;
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (!valid(ev)) continue;
      if (started && ev.time < now_) fail("clock moved backwards");
      if (!started) {
        started = true;
        result_.record.horizon_start = ev.time;
        now_ = ev.time;
      }
      if (ev.time > now_) {
        result_.record.totals.allocated += ledger_.total_allocated() * (ev.time - now_);
        now_ = ev.time;
        pass_pending = false;
      }
      ledger_.set_time(now_);
      dispatch(ev);
      if (ev.cls != EventClass::SchedulerPass) {
        start_committed();
        if (!pass_pending) {
          push(now_, EventClass::SchedulerPass, kNoJob);
          pass_pending = true;
        }
      }
    }
    result_.record.horizon_end = now_;
    finish_checks();
    return std::move(result_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream ss;
    ss << "engine at t=" << now_ << ": " << what << " (free " << ledger_.free() << ", allocated "
       << ledger_.total_allocated() << ", idle reserved " << ledger_.total_idle_reserved()
       << ", waiting " << waiting_.size() << ", active " << active_.size() << ")";
    throw InvariantViolation(ss.str());
  }

  JobRt& job(JobId id) { return jobs_[index_.at(id)]; }

  void push(Time t, EventClass cls, JobId id, std::uint64_t epoch = 0) {
    queue_.push({t, cls, id, seq_++, epoch});
  }

  bool valid(const Event& ev) {
    switch (ev.cls) {
      case EventClass::JobFinish:
      case EventClass::CheckpointComplete: {
        const JobRt& j = job(ev.job);
        return j.phase == Phase::Active && j.epoch == ev.epoch;
      }
      case EventClass::WarningExpiry: {
        const JobRt& j = job(ev.job);
        return j.phase == Phase::Draining && j.epoch == ev.epoch;
      }
      case EventClass::ReservationTimeout: {
        const auto* r = ledger_.reservation(ev.job);
        return r != nullptr && !job(ev.job).arrived && r->expiry && *r->expiry == ev.time;
      }
      default:
        return true;
    }
  }

  void dispatch(const Event& ev) {
    switch (ev.cls) {
      case EventClass::JobFinish: on_finish(job(ev.job)); break;
      case EventClass::CheckpointComplete: on_checkpoint(job(ev.job)); break;
      case EventClass::WarningExpiry: on_warning_expiry(job(ev.job)); break;
      case EventClass::OnDemandArrival: on_arrival(job(ev.job)); break;
      case EventClass::AdvanceNotice: on_notice(job(ev.job)); break;
      case EventClass::ReservationTimeout: on_timeout(job(ev.job)); break;
      case EventClass::JobSubmit: on_submit(job(ev.job)); break;
      case EventClass::SchedulerPass: on_pass(); break;
    }
  }

  // ---- queue -------------------------------------------------------------

  void enqueue(JobRt& j) {
    j.phase = Phase::Waiting;
    j.queue_key = j.pinned ? std::make_tuple(0, j.pin_time, j.spec->id)
                           : std::make_tuple(1, j.first_submit, j.spec->id);
    waiting_.insert(j.queue_key);
  }

  void dequeue(JobRt& j) { waiting_.erase(j.queue_key); }

  // ---- accounting --------------------------------------------------------

  void add_useful(JobRt& j, NodeSeconds ns) {
    result_.record.totals.useful += ns;
    j.useful += ns;
  }

  // Malleable progress up to now_ at the current size.
  void account_malleable(JobRt& j, bool finishing) {
    auto& t = result_.record.totals;
    const Time setup_end = j.setup_end();
    if (j.acct < setup_end) t.setup += j.nodes * (std::min(now_, setup_end) - j.acct);
    const Time from = std::max(j.acct, setup_end);
    if (now_ > from) {
      NodeSeconds work = j.nodes * (now_ - from);
      const NodeSeconds left = j.spec->actual_work - j.done;
      if (work > left) {
        if (!finishing) fail("malleable job " + std::to_string(j.spec->id) + " overran its work");
        t.completion_slack += work - left;
        work = left;
      }
      add_useful(j, work);
      j.done += work;
    }
    j.acct = now_;
  }

  // Closes a fixed-size segment at now_. Returns nothing; progress kept in
  // j.saved.
  void close_fixed(JobRt& j, bool finishing) {
    auto& t = result_.record.totals;
    const auto snap = j.timeline().at(now_);
    t.setup += j.nodes * snap.setup_elapsed;
    t.checkpoint_writes += j.nodes * snap.write_elapsed;
    if (finishing) {
      add_useful(j, j.nodes * snap.compute_done);
      j.saved += snap.compute_done;
    } else {
      add_useful(j, j.nodes * snap.saved);
      t.lost_compute += j.nodes * (snap.compute_done - snap.saved);
      j.saved += snap.saved;
    }
  }

  Time finish_time(const JobRt& j) const {
    if (!j.malleable()) return j.timeline().finish();
    const Time from = std::max(j.acct, j.setup_end());
    return from + ceil_div(j.spec->actual_work - j.done, j.nodes);
  }

  Time est_end(const JobRt& j) const {
    if (!j.malleable()) return j.est_timeline(j.seg_start).finish();
    const Time from = std::max(j.acct, j.setup_end());
    return from + ceil_div(j.est_work - j.done, j.nodes);
  }

  // ---- routing -----------------------------------------------------------

  std::vector<JobId> collectors(JobId first) const {
    std::vector<std::pair<Time, JobId>> order;
    for (const auto& [owner, r] : ledger_.reservations()) {
      if (owner != first && r.unfilled() > 0) order.emplace_back(r.priority, owner);
    }
    std::sort(order.begin(), order.end());
    std::vector<JobId> out;
    if (first != kNoJob && ledger_.has_reservation(first)) out.push_back(first);
    for (const auto& [p, owner] : order) out.push_back(owner);
    return out;
  }

  void release(JobRt& j, Nodes n, JobId beneficiary) {
    const auto route = collectors(beneficiary);
    ledger_.release(j.spec->id, n, route);
  }

  // ---- starting and stopping ----------------------------------------------

  void start(JobRt& j, Nodes n) {
    j.phase = Phase::Active;
    j.nodes = n;
    j.original = n;
    j.seg_start = now_;
    j.acct = now_;
    ++j.epoch;
    active_.insert(j.spec->id);
    push(finish_time(j), EventClass::JobFinish, j.spec->id, j.epoch);
    if (j.spec->kind == JobKind::Rigid) {
      if (auto c = j.timeline().next_checkpoint_after(now_)) {
        push(*c, EventClass::CheckpointComplete, j.spec->id, j.epoch);
      }
    }
  }

  void stop(JobRt& j) {
    active_.erase(j.spec->id);
    ++j.epoch;
  }

  void kill(JobRt& j, JobId beneficiary, Action tag) {
    const Nodes n = j.nodes;
    if (j.malleable()) account_malleable(j, false);
    else close_fixed(j, false);
    stop(j);
    ++j.preemptions;
    j.pledged_to = kNoJob;
    result_.log.action(now_, tag, j.spec->id, n, beneficiary);
    release(j, n, beneficiary);
    j.nodes = 0;
    enqueue(j);
  }

  void warn(JobRt& j, JobId beneficiary) {
    account_malleable(j, false);
    ++j.epoch;
    ++j.preemptions;
    j.phase = Phase::Draining;
    j.beneficiary = beneficiary;
    active_.erase(j.spec->id);
    draining_.insert(j.spec->id);
    push(now_ + mech_.warning_duration, EventClass::WarningExpiry, j.spec->id, j.epoch);
    result_.log.action(now_, Action::Warn, j.spec->id, j.nodes, beneficiary);
  }

  void resize(JobRt& j, Nodes n) {
    account_malleable(j, false);
    j.nodes = n;
    ++j.epoch;
    push(finish_time(j), EventClass::JobFinish, j.spec->id, j.epoch);
  }

  void add_lender(JobRt& od, JobId id) {
    if (std::find(od.lenders.begin(), od.lenders.end(), id) == od.lenders.end()) {
      od.lenders.push_back(id);
    }
  }

  // Arrived on-demand jobs whose reservations are full start now.
  void start_committed() {
    std::vector<std::pair<Time, JobId>> ready;
    for (const auto& [owner, r] : ledger_.reservations()) {
      if (job(owner).arrived && r.held >= r.target && r.occupied == 0) {
        ready.emplace_back(r.priority, owner);
      }
    }
    std::sort(ready.begin(), ready.end());
    for (const auto& [p, owner] : ready) {
      JobRt& od = job(owner);
      ledger_.consume_reservation(owner, od.spec->size);
      start(od, od.spec->size);
      result_.log.action(now_, Action::Start, owner, od.spec->size);
    }
  }

  // ---- handlers ----------------------------------------------------------

  void on_submit(JobRt& j) {
    result_.log.event(now_, EventClass::JobSubmit, j.spec->id, j.spec->size);
    j.first_submit = now_;
    j.arrived = true;
    enqueue(j);
  }

  void on_finish(JobRt& j) {
    result_.log.event(now_, EventClass::JobFinish, j.spec->id, j.nodes);
    if (j.malleable()) account_malleable(j, true);
    else close_fixed(j, true);
    if (j.useful != j.spec->actual_work) {
      fail("job " + std::to_string(j.spec->id) + " finished with useful work " +
           std::to_string(j.useful) + " != " + std::to_string(j.spec->actual_work));
    }
    stop(j);
    j.phase = Phase::Finished;
    j.finish = now_;
    const Nodes n = j.nodes;
    j.nodes = 0;
    if (j.on_demand() && mech_.enabled) {
      return_to_lenders(j, n);
    } else {
      release(j, n, kNoJob);
    }
  }

  void return_to_lenders(JobRt& od, Nodes n) {
    ledger_.release(od.spec->id, n, std::span<const JobId>{});
    Nodes pool = n;
    for (JobId id : od.lenders) {
      if (pool <= 0) break;
      JobRt& l = job(id);
      if (l.phase == Phase::Waiting) {
        const Nodes need = l.spec->n_min;
        if (ledger_.free() < need) continue;
        const Nodes size = l.malleable() ? std::min(l.spec->n_max, ledger_.free()) : l.spec->size;
        dequeue(l);
        ledger_.allocate(id, size);
        start(l, size);
        result_.log.action(now_, Action::Resume, id, size, od.spec->id);
        pool -= std::min(pool, size);
      } else if (l.phase == Phase::Active && l.malleable() && l.nodes < l.original &&
                 !ledger_.backfill_owner(id) && finish_time(l) > now_) {
        const Nodes add = std::min({pool, l.original - l.nodes, ledger_.free()});
        if (add <= 0) continue;
        ledger_.allocate(id, add);
        resize(l, l.nodes + add);
        result_.log.action(now_, Action::Expand, id, l.nodes, od.spec->id);
        pool -= add;
      }
    }
    for (JobId owner : collectors(kNoJob)) {
      if (pool <= 0) break;
      pool -= ledger_.reserve_available(owner, pool);
    }
  }

  void on_checkpoint(JobRt& j) {
    result_.log.event(now_, EventClass::CheckpointComplete, j.spec->id, j.nodes);
    if (auto c = j.timeline().next_checkpoint_after(now_)) {
      push(*c, EventClass::CheckpointComplete, j.spec->id, j.epoch);
    }
    if (j.pledged_to == kNoJob) return;
    const JobId owner = j.pledged_to;
    j.pledged_to = kNoJob;
    const auto* r = ledger_.reservation(owner);
    if (r != nullptr && !job(owner).arrived && r->unfilled() > 0) kill(j, owner, Action::Kill);
  }

  void on_warning_expiry(JobRt& j) {
    result_.log.event(now_, EventClass::WarningExpiry, j.spec->id, j.nodes);
    result_.record.totals.drain_occupancy += j.nodes * mech_.warning_duration;
    draining_.erase(j.spec->id);
    const Nodes n = j.nodes;
    const JobId b = j.beneficiary;
    j.beneficiary = kNoJob;
    j.nodes = 0;
    release(j, n, b);
    enqueue(j);
  }

  bool preemptable(const JobRt& j) const {
    return j.phase == Phase::Active && !j.on_demand() && j.pledged_to == kNoJob &&
           !ledger_.backfill_owner(j.spec->id);
  }

  Candidate candidate(const JobRt& j) const {
    Candidate c{j.spec->id, j.spec->kind, j.nodes, j.spec->n_min, 0};
    if (j.malleable()) {
      c.overhead = preemption_overhead_malleable(j.nodes, mech_.warning_duration, j.spec->setup_time);
    } else {
      c.overhead = preemption_overhead_rigid(j.nodes, now_, j.timeline().at(now_).last_checkpoint,
                                             j.spec->setup_time);
    }
    return c;
  }

  void clear_claims(JobId owner) {
    for (JobId id : active_) {
      JobRt& j = job(id);
      if (j.pledged_to == owner) j.pledged_to = kNoJob;
    }
    for (JobId id : draining_) {
      JobRt& j = job(id);
      if (j.beneficiary == owner) j.beneficiary = kNoJob;
    }
  }

  void on_arrival(JobRt& od) {
    const auto t0 = std::chrono::steady_clock::now();
    const JobId id = od.spec->id;
    result_.log.event(now_, EventClass::OnDemandArrival, id, od.spec->size);
    od.first_submit = now_;
    od.arrived = true;
    for (JobId a : active_) {
      if (job(a).pledged_to == id) job(a).pledged_to = kNoJob;
    }

    ArrivalState st;
    st.demand = od.spec->size;
    st.free = ledger_.free();
    const auto* res = ledger_.reservation(id);
    if (res != nullptr) {
      st.held = res->held;
      for (JobId b : ledger_.backfilled_on(id)) st.backfilled.emplace_back(b, ledger_.allocated(b));
    }
    for (JobId d : draining_) {
      if (job(d).beneficiary == id) st.pending_drain += job(d).nodes;
    }
    for (JobId a : active_) {
      const JobRt& j = job(a);
      if (preemptable(j)) st.candidates.push_back(candidate(j));
    }
    const PreemptionPlan plan = plan_arrival(mech_.arrival, st);

    if (!plan.feasible) {
      if (res != nullptr) ledger_.dissolve_reservation(id);
      clear_claims(id);
      od.pinned = true;
      od.pin_time = now_;
      enqueue(od);
      result_.log.action(now_, Action::Stall, id, od.spec->size);
    } else {
      od.instant = true;
      if (res == nullptr) ledger_.open_reservation(id, od.spec->size, std::nullopt, now_);
      for (const auto& v : plan.victims) {
        if (v.action == VictimAction::EvictBackfilled) kill(job(v.job), kNoJob, Action::Evict);
      }
      const auto* r = ledger_.reservation(id);
      ledger_.reserve_available(id, r->unfilled() - st.pending_drain);
      for (const auto& s : plan.shrinks) {
        JobRt& m = job(s.job);
        const Nodes give = m.nodes - s.new_size;
        resize(m, s.new_size);
        ++m.shrinks;
        ledger_.release(m.spec->id, give, collectors(id));
        result_.log.action(now_, Action::Shrink, m.spec->id, s.new_size, id);
        add_lender(od, m.spec->id);
      }
      for (const auto& v : plan.victims) {
        if (v.action == VictimAction::KillRigid) {
          kill(job(v.job), id, Action::Kill);
        } else if (v.action == VictimAction::WarnMalleable) {
          warn(job(v.job), id);
        } else {
          continue;
        }
        add_lender(od, v.job);
      }
      result_.log.action(now_, Action::Commit, id, od.spec->size);
    }
    if (opts_.measure_latency) {
      const auto dt = std::chrono::steady_clock::now() - t0;
      result_.arrival_latency.push_back(
          {std::chrono::duration<double, std::milli>(dt).count(), waiting_.size()});
    }
  }

  void on_notice(JobRt& od) {
    const NoticeProfile& n = *od.spec->notice;
    const JobId id = od.spec->id;
    result_.log.event(now_, EventClass::AdvanceNotice, id, n.estimated_size);
    if (mech_.notice == NoticeStrategy::None) return;
    const Nodes target = std::min(n.estimated_size, sys_.capacity);
    const Time expiry = n.estimated_arrival + sys_.reservation_grace;
    ledger_.open_reservation(id, target, expiry, now_);
    push(expiry, EventClass::ReservationTimeout, id);
    const Nodes banked = ledger_.reserve_available(id, target);
    result_.log.action(now_, Action::Reserve, id, banked);
    if (mech_.notice != NoticeStrategy::CollectUntilPredicted) return;

    const Nodes deficit = ledger_.reservation(id)->unfilled();
    if (deficit <= 0) return;
    Nodes earlier = 0;
    for (const auto& [owner, r] : ledger_.reservations()) {
      if (owner != id) earlier += r.unfilled();
    }
    std::vector<PrepCandidate> running;
    for (JobId a : active_) {
      const JobRt& j = job(a);
      if (j.pledged_to != kNoJob || ledger_.backfill_owner(a)) continue;
      PrepCandidate p{candidate(j), est_end(j), std::nullopt};
      if (j.spec->kind == JobKind::Rigid) p.next_checkpoint = j.timeline().next_checkpoint_after(now_);
      running.push_back(p);
    }
    const PrepPlan plan =
        plan_predicted(deficit, n.estimated_arrival, earlier, running, mech_.cup_checkpoint_aligned);
    for (const auto& v : plan.victims) {
      JobRt& j = job(v.job);
      switch (v.action) {
        case PrepAction::KillNow: kill(j, id, Action::Kill); break;
        case PrepAction::Warn: warn(j, id); break;
        case PrepAction::KillAtCheckpoint:
          j.pledged_to = id;
          result_.log.action(now_, Action::Pledge, v.job, j.nodes, id);
          break;
      }
      add_lender(od, v.job);
    }
  }

  void on_timeout(JobRt& od) {
    const JobId id = od.spec->id;
    const Nodes freed = ledger_.dissolve_reservation(id);
    result_.log.event(now_, EventClass::ReservationTimeout, id, freed);
    clear_claims(id);
  }

  void on_pass() {
    const auto t0 = std::chrono::steady_clock::now();
    result_.log.event(now_, EventClass::SchedulerPass, kNoJob, static_cast<Nodes>(waiting_.size()));
    if (waiting_.empty()) return;
    QueueSnapshot snap;
    snap.now = now_;
    snap.free = ledger_.free();
    snap.waiting.reserve(waiting_.size());
    for (const auto& key : waiting_) {
      const JobRt& j = job(std::get<2>(key));
      WaitingJob w;
      w.id = j.spec->id;
      w.kind = j.spec->kind;
      w.min_nodes = j.spec->n_min;
      w.max_nodes = j.spec->n_max;
      w.first_submit = j.first_submit;
      w.pinned = j.pinned;
      w.pin_time = j.pin_time;
      w.setup = j.spec->setup_time;
      if (j.malleable()) {
        w.est_work = j.est_work - j.done;
      } else {
        w.fixed_duration = j.est_timeline(0).finish();
      }
      snap.waiting.push_back(w);
    }
    for (JobId a : active_) {
      if (ledger_.backfill_owner(a)) continue;
      const JobRt& j = job(a);
      snap.releases.push_back({est_end(j), j.nodes});
    }
    if (mech_.enabled) {
      for (const auto& [owner, r] : ledger_.reservations()) {
        if (!job(owner).arrived && r.idle() > 0) snap.reservations.push_back({owner, r.priority, r.idle()});
      }
    }
    const PassResult pass = easy_backfill(snap);
    for (const auto& d : pass.starts) {
      JobRt& j = job(d.job);
      dequeue(j);
      Action tag = d.backfilled ? Action::Backfill : Action::Start;
      if (d.on_reservation) {
        if (!ledger_.backfill_on_reserved(d.job, *d.on_reservation, d.nodes)) fail("bad reserved backfill");
        tag = Action::BackfillReserved;
      } else if (!ledger_.allocate(d.job, d.nodes)) {
        fail("policy started job " + std::to_string(d.job) + " without free nodes");
      }
      start(j, d.nodes);
      if (j.on_demand() && !mech_.enabled && now_ == j.spec->submit_time) j.instant = true;
      result_.log.action(now_, tag, d.job, d.nodes, d.on_reservation.value_or(kNoJob));
    }
    if (opts_.measure_latency) {
      const auto dt = std::chrono::steady_clock::now() - t0;
      result_.pass_latency.push_back(
          {std::chrono::duration<double, std::milli>(dt).count(), snap.waiting.size()});
    }
  }

  void finish_checks() {
    for (const auto& j : jobs_) {
      if (j.phase != Phase::Finished) {
        fail("job " + std::to_string(j.spec->id) + " never finished");
      }
      result_.record.jobs.push_back({j.spec->id, j.spec->kind, j.first_submit, j.finish,
                                     j.preemptions, j.shrinks, j.instant});
    }
    std::sort(result_.record.jobs.begin(), result_.record.jobs.end(),
              [](const JobOutcome& a, const JobOutcome& b) { return a.id < b.id; });
    const auto& t = result_.record.totals;
    if (t.allocated != t.accounted()) {
      fail("node-seconds allocated " + std::to_string(t.allocated) + " but accounted " +
           std::to_string(t.accounted()));
    }
    ledger_.audit();
    if (ledger_.total_allocated() != 0 || !ledger_.reservations().empty()) {
      fail("nodes still held at the end of the run");
    }
  }

  SystemConfig sys_;
  MechanismConfig mech_;
  EngineOptions opts_;
  ClusterLedger ledger_;
  std::vector<JobRt> jobs_;
  std::unordered_map<JobId, std::size_t> index_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
  std::uint64_t seq_ = 0;
  Time now_ = 0;
  std::set<std::tuple<int, Time, JobId>> waiting_;
  std::set<JobId> active_;
  std::set<JobId> draining_;
  RunResult result_;
};

}  // namespace

RunResult simulate(const std::vector<JobSpec>& jobs, const SystemConfig& sys,
                   const MechanismConfig& mech, const EngineOptions& opts) {
  Engine engine(jobs, sys, mech, opts);
  return engine.run();
}

}  // namespace hybridsim
