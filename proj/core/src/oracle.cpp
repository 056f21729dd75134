#include "hybridsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "hybridsim/random.hpp"

// A second implementation of the simulator semantics. It deliberately shares
// no code with the engine beyond the spec and report types: node counts are
// recomputed from scratch, progress is stepped second by second, and the
// backfill shadow is found by scanning forward in time.

namespace hybridsim {

namespace {

constexpr Time kHuge = Time{1} << 50;
constexpr Time kMaxSteps = 2'000'000;

enum class St { NotYet, Queued, Running, Draining, Done };

struct OJob {
  JobSpec s;
  St st = St::NotYet;
  Nodes n = 0;
  Nodes orig = 0;
  Time seg_start = 0;
  Time tau = kHuge;
  Time delta = 0;
  Time setup_left = 0;
  Time compute_left = 0;
  Time since_ckpt = 0;
  Time write_left = 0;
  Time saved = 0;
  Time seg_saved = 0;
  Time last_ckpt = 0;
  Time est_compute = 0;
  NodeSeconds est_work = 0;
  NodeSeconds done = 0;
  Time drain_left = 0;
  JobId benef = -1;
  JobId pledge = -1;
  JobId on_res = -1;
  bool finish_flag = false;
  bool ckpt_flag = false;
  bool drain_flag = false;
  Time first_submit = 0;
  Time finish = -1;
  int pre = 0;
  int shr = 0;
  bool instant = false;
  bool arrived = false;
  bool pinned = false;
  Time pin_time = 0;
  std::vector<JobId> lenders;

  bool mall() const { return s.kind == JobKind::Malleable; }
  bool od() const { return s.kind == JobKind::OnDemand; }
};

struct ORes {
  Nodes target = 0;
  Nodes held = 0;
  Nodes occupied = 0;
  std::optional<Time> expiry;
  Time prio = 0;
};

Time wall(Time setup, Time compute, Time tau, Time delta) {
  Time w = setup;
  Time c = compute;
  while (c > tau) {
    w += tau + delta;
    c -= tau;
  }
  return w + std::max<Time>(0, c);
}

Time up_div(NodeSeconds a, Nodes b) {
  Time q = 0;
  while (q * b < a) ++q;
  return q;
}

class Oracle {
 public:
  Oracle(const TinyInstance& in, MechanismConfig mech) : sys_(in.system), mech_(mech) {
    mech_.warning_duration = in.warning_duration;
    if (sys_.capacity > kTinyMaxNodes || in.jobs.size() > kTinyMaxJobs) {
      throw std::invalid_argument("instance exceeds the oracle's tiny bounds");
    }
    sys_.validate();
    for (const auto& s : in.jobs) {
      validate(s);
      if (s.n_min > sys_.capacity) throw std::invalid_argument("job larger than the system");
      OJob j;
      j.s = s;
      if (s.kind == JobKind::Malleable) {
        j.est_work = std::max<NodeSeconds>((s.runtime_estimate - s.setup_time) * s.n_max,
                                           s.actual_work);
      } else {
        const Time c = s.actual_work / s.size;
        j.est_compute = std::max<Time>(s.runtime_estimate - s.setup_time, c);
        if (s.kind == JobKind::Rigid) {
          j.delta = s.size < sys_.checkpoint_node_threshold ? sys_.checkpoint_cost_small
                                                             : sys_.checkpoint_cost_large;
          const double x = sys_.checkpoint_scale * std::sqrt(2.0 * static_cast<double>(j.delta) *
                                                             static_cast<double>(sys_.mtbf));
          j.tau = std::max<Time>(1, std::llround(x));
        }
      }
      jobs_[s.id] = j;
    }
  }

  OracleResult run() {
    if (jobs_.empty()) return {};
    Time t = kHuge;
    for (auto& [id, j] : jobs_) {
      t = std::min(t, j.s.submit_time);
      if (notice_at(j)) t = std::min(t, *notice_at(j));
    }
    bool first = true;
    for (Time steps = 0;; ++steps) {
      if (steps > kMaxSteps) throw InvariantViolation("oracle did not terminate");
      const bool any = process(t);
      if (any) {
        if (first) out_.record.horizon_start = t;
        first = false;
        out_.record.horizon_end = t;
      }
      if (std::all_of(jobs_.begin(), jobs_.end(),
                      [](const auto& kv) { return kv.second.st == St::Done; })) {
        break;
      }
      step();
      ++t;
    }
    out_.record.capacity = sys_.capacity;
    for (const auto& [id, j] : jobs_) {
      out_.record.jobs.push_back({id, j.s.kind, j.first_submit, j.finish, j.pre, j.shr, j.instant});
    }
    return std::move(out_);
  }

 private:
  std::optional<Time> notice_at(const OJob& j) const {
    if (!mech_.enabled || !j.od() || !j.s.notice || !j.s.notice->notice_time) return std::nullopt;
    if (*j.s.notice->notice_time >= j.s.submit_time) return std::nullopt;
    return *j.s.notice->notice_time;
  }

  Nodes free_nodes() const {
    Nodes f = sys_.capacity;
    for (const auto& [id, j] : jobs_) {
      if (j.st == St::Running || j.st == St::Draining) f -= j.n;
    }
    for (const auto& [o, r] : res_) f -= r.held - r.occupied;
    if (f < 0) throw InvariantViolation("oracle: negative free count");
    return f;
  }

  // Reservations that still collect, by (priority, owner), with `first`
  // leading if it has one.
  std::vector<JobId> route(JobId first) const {
    std::vector<JobId> out;
    if (first >= 0 && res_.contains(first)) out.push_back(first);
    std::vector<std::pair<Time, JobId>> rest;
    for (const auto& [o, r] : res_) {
      if (o != first && r.held < r.target) rest.push_back({r.prio, o});
    }
    std::sort(rest.begin(), rest.end());
    for (const auto& p : rest) out.push_back(p.second);
    return out;
  }

  // Nodes leave job j; returns them to its host reservation or banks them.
  void give_back(OJob& j, Nodes k, JobId first) {
    if (j.on_res >= 0) {
      res_.at(j.on_res).occupied -= k;
      if (j.n == k) j.on_res = -1;
      return;
    }
    for (JobId o : route(first)) {
      ORes& r = res_.at(o);
      const Nodes b = std::min(k, std::max<Nodes>(0, r.target - r.held));
      r.held += b;
      k -= b;
    }
  }

  // ---- progress ----------------------------------------------------------

  void step() {
    auto& tot = out_.record.totals;
    for (auto& [id, j] : jobs_) {
      if (j.st == St::Draining) {
        tot.allocated += j.n;
        tot.drain_occupancy += j.n;
        if (--j.drain_left == 0) j.drain_flag = true;
        continue;
      }
      if (j.st != St::Running) continue;
      tot.allocated += j.n;
      if (j.mall()) {
        if (j.setup_left > 0) {
          --j.setup_left;
          tot.setup += j.n;
        } else {
          const NodeSeconds w = std::min<NodeSeconds>(j.n, j.s.actual_work - j.done);
          j.done += w;
          tot.useful += w;
          tot.completion_slack += j.n - w;
        }
        if (j.setup_left == 0 && j.done == j.s.actual_work) j.finish_flag = true;
        continue;
      }
      if (j.setup_left > 0) {
        --j.setup_left;
        tot.setup += j.n;
      } else if (j.write_left > 0) {
        tot.checkpoint_writes += j.n;
        if (--j.write_left == 0) j.ckpt_flag = true;
        continue;
      } else {
        --j.compute_left;
        ++j.since_ckpt;
        if (j.compute_left > 0 && j.since_ckpt == j.tau) j.write_left = j.delta;
      }
      if (j.setup_left == 0 && j.compute_left == 0) j.finish_flag = true;
    }
  }

  Time est_end(const OJob& j, Time now) const {
    if (j.mall()) {
      return std::max(now, j.seg_start + j.s.setup_time) + up_div(j.est_work - j.done, j.n);
    }
    return j.seg_start +
           wall(j.s.setup_time, std::max<Time>(0, j.est_compute - j.seg_saved), j.tau, j.delta);
  }

  std::optional<Time> next_ckpt(const OJob& j, Time now) const {
    if (j.s.kind != JobKind::Rigid) return std::nullopt;
    OJob c = j;
    for (Time k = 1;; ++k) {
      if (c.setup_left > 0) {
        --c.setup_left;
      } else if (c.write_left > 0) {
        if (--c.write_left == 0) return now + k;
      } else {
        --c.compute_left;
        ++c.since_ckpt;
        if (c.compute_left > 0 && c.since_ckpt == c.tau) c.write_left = c.delta;
      }
      if (c.setup_left == 0 && c.compute_left == 0 && c.write_left == 0) return std::nullopt;
    }
  }

  // ---- lifecycle ---------------------------------------------------------

  void launch(OJob& j, Nodes n, Time now) {
    j.st = St::Running;
    j.n = n;
    j.orig = n;
    j.seg_start = now;
    j.setup_left = j.s.setup_time;
    j.finish_flag = j.ckpt_flag = false;
    if (!j.mall()) {
      j.compute_left = j.s.actual_work / j.s.size - j.saved;
      j.since_ckpt = 0;
      j.write_left = 0;
      j.seg_saved = j.saved;
      j.last_ckpt = now + j.s.setup_time;
    }
  }

  void queue(OJob& j) { j.st = St::Queued; }

  void stop_rigid_progress(OJob& j) {
    out_.record.totals.lost_compute += j.n * j.since_ckpt;
    j.since_ckpt = 0;
    j.write_left = 0;
  }

  void kill(OJob& j, JobId benef, Action tag, Time now) {
    if (!j.mall()) stop_rigid_progress(j);
    ++j.pre;
    j.pledge = -1;
    j.finish_flag = j.ckpt_flag = false;
    log_.action(now, tag, j.s.id, j.n, benef);
    const Nodes k = j.n;
    give_back(j, k, benef);
    j.n = 0;
    queue(j);
  }

  void warn(OJob& j, JobId benef, Time now) {
    ++j.pre;
    j.st = St::Draining;
    j.drain_left = mech_.warning_duration;
    j.benef = benef;
    j.finish_flag = false;
    log_.action(now, Action::Warn, j.s.id, j.n, benef);
  }

  void add_lender(OJob& od, JobId id) {
    if (std::find(od.lenders.begin(), od.lenders.end(), id) == od.lenders.end()) {
      od.lenders.push_back(id);
    }
  }

  void start_committed(Time now) {
    std::vector<std::pair<Time, JobId>> ready;
    for (const auto& [o, r] : res_) {
      if (jobs_.at(o).arrived && r.held >= r.target && r.occupied == 0) ready.push_back({r.prio, o});
    }
    std::sort(ready.begin(), ready.end());
    for (const auto& [p, o] : ready) {
      OJob& j = jobs_.at(o);
      res_.erase(o);
      launch(j, j.s.size, now);
      log_.action(now, Action::Start, o, j.s.size);
    }
  }

  void dissolve(JobId owner) {
    res_.erase(owner);
    for (auto& [id, j] : jobs_) {
      if (j.on_res == owner) j.on_res = -1;
    }
  }

  void clear_claims(JobId owner) {
    for (auto& [id, j] : jobs_) {
      if (j.st == St::Running && j.pledge == owner) j.pledge = -1;
      if (j.st == St::Draining && j.benef == owner) j.benef = -1;
    }
  }

  // ---- event handlers ------------------------------------------------------

  void on_finish(OJob& j, Time now) {
    log_.event(now, EventClass::JobFinish, j.s.id, j.n);
    if (!j.mall()) {
      out_.record.totals.useful += j.n * j.since_ckpt;
      j.saved += j.since_ckpt;
      j.since_ckpt = 0;
    }
    j.st = St::Done;
    j.finish = now;
    j.finish_flag = false;
    const Nodes k = j.n;
    if (!(j.od() && mech_.enabled)) {
      give_back(j, k, -1);
      j.n = 0;
      return;
    }
    j.n = 0;
    Nodes pool = k;
    for (JobId id : j.lenders) {
      if (pool <= 0) break;
      OJob& l = jobs_.at(id);
      if (l.st == St::Queued) {
        const Nodes f = free_nodes();
        if (f < l.s.n_min) continue;
        const Nodes size = l.mall() ? std::min(l.s.n_max, f) : l.s.size;
        launch(l, size, now);
        log_.action(now, Action::Resume, id, size, j.s.id);
        pool -= std::min(pool, size);
      } else if (l.st == St::Running && l.mall() && l.n < l.orig && l.on_res < 0 &&
                 !l.finish_flag) {
        const Nodes add = std::min({pool, l.orig - l.n, free_nodes()});
        if (add <= 0) continue;
        l.n += add;
        log_.action(now, Action::Expand, id, l.n, j.s.id);
        pool -= add;
      }
    }
    for (JobId o : route(-1)) {
      if (pool <= 0) break;
      ORes& r = res_.at(o);
      const Nodes b = std::min({free_nodes(), pool, r.target - r.held});
      r.held += b;
      pool -= b;
    }
  }

  void on_checkpoint(OJob& j, Time now) {
    log_.event(now, EventClass::CheckpointComplete, j.s.id, j.n);
    j.ckpt_flag = false;
    out_.record.totals.useful += j.n * j.since_ckpt;
    j.saved += j.since_ckpt;
    j.since_ckpt = 0;
    j.last_ckpt = now;
    if (j.pledge < 0) return;
    const JobId owner = j.pledge;
    j.pledge = -1;
    auto it = res_.find(owner);
    if (it != res_.end() && !jobs_.at(owner).arrived && it->second.held < it->second.target) {
      kill(j, owner, Action::Kill, now);
    }
  }

  void on_drained(OJob& j, Time now) {
    log_.event(now, EventClass::WarningExpiry, j.s.id, j.n);
    j.drain_flag = false;
    const JobId b = j.benef;
    j.benef = -1;
    give_back(j, j.n, b);
    j.n = 0;
    queue(j);
  }

  NodeSeconds overhead(const OJob& j, Time now) const {
    if (j.mall()) return j.n * (mech_.warning_duration + j.s.setup_time);
    return j.n * (std::max<Time>(0, now - j.last_ckpt) + j.s.setup_time);
  }

  void on_arrival(OJob& od, Time now) {
    const JobId id = od.s.id;
    log_.event(now, EventClass::OnDemandArrival, id, od.s.size);
    od.first_submit = now;
    od.arrived = true;
    for (auto& [k, j] : jobs_) {
      if (j.st == St::Running && j.pledge == id) j.pledge = -1;
    }
    const bool has_res = res_.contains(id);
    const Nodes held = has_res ? res_.at(id).held : 0;
    Nodes pending = 0;
    for (const auto& [k, j] : jobs_) {
      if (j.st == St::Draining && j.benef == id) pending += j.n;
    }
    const Nodes deficit = od.s.size - (free_nodes() + held + pending);

    struct Cand {
      NodeSeconds ov;
      JobId id;
    };
    std::vector<Cand> cands;
    Nodes mall_slack = 0;
    for (const auto& [k, j] : jobs_) {
      if (j.st != St::Running || j.od() || j.pledge >= 0 || j.on_res >= 0) continue;
      cands.push_back({overhead(j, now), k});
      if (j.mall()) mall_slack += j.n - j.s.n_min;
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.ov != b.ov ? a.ov < b.ov : a.id < b.id; });

    bool feasible = deficit <= 0;
    bool shrink = false;
    std::vector<JobId> victims;
    if (!feasible) {
      if (mech_.arrival == ArrivalStrategy::ShrinkThenPreempt && mall_slack >= deficit) {
        feasible = shrink = true;
      } else {
        Nodes got = 0;
        for (const auto& c : cands) {
          if (got >= deficit) break;
          victims.push_back(c.id);
          got += jobs_.at(c.id).n;
        }
        feasible = got >= deficit;
      }
    }

    if (!feasible) {
      dissolve(id);
      clear_claims(id);
      od.pinned = true;
      od.pin_time = now;
      queue(od);
      log_.action(now, Action::Stall, id, od.s.size);
      return;
    }
    od.instant = true;
    if (!has_res) res_[id] = ORes{od.s.size, 0, 0, std::nullopt, now};
    for (auto& [k, j] : jobs_) {
      if (j.st == St::Running && j.on_res == id) kill(j, -1, Action::Evict, now);
    }
    {
      ORes& r = res_.at(id);
      const Nodes want = std::max<Nodes>(0, r.target - r.held - pending);
      const Nodes b = std::min(want, free_nodes());
      r.held += b;
    }
    if (shrink) {
      // largest remainder over slack, smaller id first on ties
      std::vector<JobId> ids;
      for (const auto& [k, j] : jobs_) {
        if (j.st == St::Running && j.mall() && j.pledge < 0 && j.on_res < 0 && j.n > j.s.n_min) {
          ids.push_back(k);
        }
      }
      std::map<JobId, Nodes> give;
      Nodes assigned = 0;
      for (JobId k : ids) {
        const OJob& j = jobs_.at(k);
        give[k] = deficit * (j.n - j.s.n_min) / mall_slack;
        assigned += give[k];
      }
      while (assigned < deficit) {
        JobId best = -1;
        NodeSeconds best_rem = -1;
        for (JobId k : ids) {
          const OJob& j = jobs_.at(k);
          const NodeSeconds rem = (deficit * (j.n - j.s.n_min)) % mall_slack;
          const bool used = give[k] * mall_slack > deficit * (j.n - j.s.n_min);
          if (!used && rem > best_rem) {
            best_rem = rem;
            best = k;
          }
        }
        ++give[best];
        ++assigned;
      }
      for (JobId k : ids) {
        if (give[k] == 0) continue;
        OJob& j = jobs_.at(k);
        j.n -= give[k];
        ++j.shr;
        give_back(j, give[k], id);
        log_.action(now, Action::Shrink, k, j.n, id);
        add_lender(od, k);
      }
    }
    for (JobId v : victims) {
      OJob& j = jobs_.at(v);
      if (j.mall()) warn(j, id, now);
      else kill(j, id, Action::Kill, now);
      add_lender(od, v);
    }
    log_.action(now, Action::Commit, id, od.s.size);
  }

  void on_notice(OJob& od, Time now) {
    const NoticeProfile& n = *od.s.notice;
    const JobId id = od.s.id;
    log_.event(now, EventClass::AdvanceNotice, id, n.estimated_size);
    if (mech_.notice == NoticeStrategy::None) return;
    ORes r{std::min(n.estimated_size, sys_.capacity), 0, 0,
           n.estimated_arrival + sys_.reservation_grace, now};
    r.held = std::min(r.target, free_nodes());
    res_[id] = r;
    log_.action(now, Action::Reserve, id, r.held);
    if (mech_.notice != NoticeStrategy::CollectUntilPredicted) return;
    const Nodes deficit = r.target - r.held;
    if (deficit <= 0) return;
    Nodes earlier = 0;
    for (const auto& [o, x] : res_) {
      if (o != id) earlier += x.target - x.held;
    }
    Nodes supply = 0;
    struct Cand {
      NodeSeconds ov;
      JobId id;
    };
    std::vector<Cand> late;
    for (const auto& [k, j] : jobs_) {
      if (j.st != St::Running || j.pledge >= 0 || j.on_res >= 0) continue;
      if (est_end(j, now) <= n.estimated_arrival) supply += j.n;
      else if (!j.od()) late.push_back({overhead(j, now), k});
    }
    const Nodes remaining = deficit - std::max<Nodes>(0, supply - earlier);
    if (remaining <= 0) return;
    Nodes avail = 0;
    for (const auto& c : late) avail += jobs_.at(c.id).n;
    if (avail < remaining) return;
    std::sort(late.begin(), late.end(),
              [](const Cand& a, const Cand& b) { return a.ov != b.ov ? a.ov < b.ov : a.id < b.id; });
    Nodes got = 0;
    for (const auto& c : late) {
      if (got >= remaining) break;
      OJob& j = jobs_.at(c.id);
      got += j.n;
      if (j.mall()) {
        warn(j, id, now);
      } else {
        const auto ck = next_ckpt(j, now);
        if (mech_.cup_checkpoint_aligned && ck && *ck <= n.estimated_arrival) {
          j.pledge = id;
          log_.action(now, Action::Pledge, c.id, j.n, id);
        } else {
          kill(j, id, Action::Kill, now);
        }
      }
      add_lender(od, c.id);
    }
  }

  void on_timeout(JobId owner, Time now) {
    const ORes r = res_.at(owner);
    log_.event(now, EventClass::ReservationTimeout, owner, r.held - r.occupied);
    dissolve(owner);
    clear_claims(owner);
  }

  void on_submit(OJob& j, Time now) {
    log_.event(now, EventClass::JobSubmit, j.s.id, j.s.size);
    j.first_submit = now;
    j.arrived = true;
    queue(j);
  }

  Time waiting_duration(const OJob& j, Nodes n) const {
    if (j.mall()) return j.s.setup_time + up_div(j.est_work - j.done, n);
    return wall(j.s.setup_time, std::max<Time>(0, j.est_compute - j.saved), j.tau, j.delta);
  }

  void pass(Time now) {
    std::vector<JobId> order;
    for (const auto& [k, j] : jobs_) {
      if (j.st == St::Queued) order.push_back(k);
    }
    log_.event(now, EventClass::SchedulerPass, -1, static_cast<Nodes>(order.size()));
    if (order.empty()) return;
    std::sort(order.begin(), order.end(), [&](JobId a, JobId b) {
      const OJob& x = jobs_.at(a);
      const OJob& y = jobs_.at(b);
      if (x.pinned != y.pinned) return x.pinned;
      const Time kx = x.pinned ? x.pin_time : x.first_submit;
      const Time ky = y.pinned ? y.pin_time : y.first_submit;
      return kx != ky ? kx < ky : a < b;
    });

    std::vector<std::pair<Time, Nodes>> ends;  // expected releases
    for (const auto& [k, j] : jobs_) {
      if (j.st == St::Running && j.on_res < 0) ends.push_back({est_end(j, now), j.n});
    }
    std::size_t i = 0;
    for (; i < order.size(); ++i) {
      OJob& j = jobs_.at(order[i]);
      const Nodes f = free_nodes();
      if (j.s.n_min > f) break;
      const Nodes n = std::min(j.s.n_max, f);
      const Time d = waiting_duration(j, n);
      launch(j, n, now);
      ends.push_back({now + d, n});
      log_.action(now, Action::Start, order[i], n);
    }
    if (i == order.size()) return;

    // scan forward for the head's earliest start
    const Nodes need = jobs_.at(order[i]).s.n_min;
    const Nodes f0 = free_nodes();
    Time last = now;
    for (const auto& e : ends) last = std::max(last, e.first);
    Time shadow = kHuge;
    Nodes extra = 0;
    for (Time T = now; T <= last; ++T) {
      Nodes avail = f0;
      for (const auto& e : ends) {
        if (e.first <= T) avail += e.second;
      }
      if (avail >= need) {
        shadow = T;
        extra = avail - need;
        break;
      }
    }

    for (std::size_t k = i + 1; k < order.size(); ++k) {
      OJob& j = jobs_.at(order[k]);
      const Nodes f = free_nodes();
      if (j.s.n_min <= f) {
        const Nodes hi = std::min(j.s.n_max, f);
        if (shadow == kHuge || now + waiting_duration(j, hi) <= shadow) {
          launch(j, hi, now);
          log_.action(now, Action::Backfill, order[k], hi);
          continue;
        }
        const Nodes n = std::min(hi, extra);
        if (n >= j.s.n_min) {
          extra -= n;
          launch(j, n, now);
          log_.action(now, Action::Backfill, order[k], n);
          continue;
        }
      }
      if (j.od() || !mech_.enabled) continue;
      std::vector<std::pair<Time, JobId>> hosts;
      for (const auto& [o, r] : res_) {
        if (!jobs_.at(o).arrived && r.held - r.occupied > 0) hosts.push_back({r.prio, o});
      }
      std::sort(hosts.begin(), hosts.end());
      for (const auto& [p, o] : hosts) {
        ORes& r = res_.at(o);
        if (r.held - r.occupied < j.s.n_min) continue;
        const Nodes n = std::min(j.s.n_max, r.held - r.occupied);
        r.occupied += n;
        launch(j, n, now);
        j.on_res = o;
        log_.action(now, Action::BackfillReserved, order[k], n, o);
        break;
      }
    }
  }

  // Processes everything due at t. Returns whether any event happened.
  bool process(Time t) {
    bool any = false;
    auto after = [&] {
      any = true;
      start_committed(t);
    };
    std::vector<JobId> ids;
    auto collect = [&](auto pred) {
      ids.clear();
      for (const auto& [k, j] : jobs_) {
        if (pred(j)) ids.push_back(k);
      }
      return ids;
    };
    for (JobId k : collect([](const OJob& j) { return j.st == St::Running && j.finish_flag; })) {
      OJob& j = jobs_.at(k);
      if (j.st != St::Running || !j.finish_flag) continue;
      on_finish(j, t);
      after();
    }
    for (JobId k : collect([](const OJob& j) { return j.st == St::Running && j.ckpt_flag; })) {
      OJob& j = jobs_.at(k);
      if (j.st != St::Running || !j.ckpt_flag) continue;
      on_checkpoint(j, t);
      after();
    }
    for (JobId k : collect([](const OJob& j) { return j.st == St::Draining && j.drain_flag; })) {
      on_drained(jobs_.at(k), t);
      after();
    }
    if (mech_.enabled) {
      for (JobId k : collect([&](const OJob& j) {
             return j.st == St::NotYet && j.od() && j.s.submit_time == t;
           })) {
        on_arrival(jobs_.at(k), t);
        after();
      }
      for (JobId k : collect([&](const OJob& j) {
             auto n = notice_at(j);
             return n && *n == t;
           })) {
        on_notice(jobs_.at(k), t);
        after();
      }
      std::vector<JobId> due;
      for (const auto& [o, r] : res_) {
        if (r.expiry && *r.expiry == t && !jobs_.at(o).arrived) due.push_back(o);
      }
      for (JobId o : due) {
        if (!res_.contains(o) || jobs_.at(o).arrived) continue;
        on_timeout(o, t);
        after();
      }
    }
    for (JobId k : collect([&](const OJob& j) {
           return j.st == St::NotYet && j.s.submit_time == t && (!j.od() || !mech_.enabled);
         })) {
      on_submit(jobs_.at(k), t);
      after();
    }
    if (any) {
      pass(t);
      if (!mech_.enabled) {
        for (auto& [k, j] : jobs_) {
          if (j.od() && j.st == St::Running && j.seg_start == t && j.s.submit_time == t) {
            j.instant = true;
          }
        }
      }
    }
    return any;
  }

  SystemConfig sys_;
  MechanismConfig mech_;
  std::map<JobId, OJob> jobs_;
  std::map<JobId, ORes> res_;
  EventLog log_;
  OracleResult out_;

 public:
  EventLog take_log() { return std::move(log_); }
};

}  // namespace

OracleResult oracle_run(const TinyInstance& instance, MechanismConfig mech) {
  Oracle o(instance, mech);
  OracleResult r = o.run();
  r.log = o.take_log();
  return r;
}

TinyInstance random_tiny_instance(std::uint64_t seed) {
  Rng rng(seed);
  TinyInstance in;
  in.system.capacity = rng.uniform_int(2, kTinyMaxNodes);
  in.system.mtbf = 1;
  in.system.checkpoint_cost_small = 2;
  in.system.checkpoint_cost_large = 2;
  in.system.checkpoint_scale = rng.bernoulli(0.5) ? 1.0 : 2.0;  // tau 2 or 4
  in.system.reservation_grace = rng.uniform_int(0, 3);
  in.warning_duration = rng.uniform_int(1, 3);
  const auto n = static_cast<std::size_t>(rng.uniform_int(1, kTinyMaxJobs));
  for (std::size_t i = 0; i < n; ++i) {
    JobSpec s;
    s.id = static_cast<JobId>(i + 1);
    s.submit_time = rng.uniform_int(0, 10);
    s.setup_time = rng.uniform_int(0, 2);
    s.project = "p" + std::to_string(rng.uniform_int(0, 2));
    const double u = rng.uniform01();
    s.kind = u < 0.3 ? JobKind::Rigid : (u < 0.65 ? JobKind::Malleable : JobKind::OnDemand);
    if (s.kind == JobKind::Malleable) {
      s.n_max = s.size = rng.uniform_int(1, in.system.capacity);
      s.n_min = rng.bernoulli(0.5) ? 1 : rng.uniform_int(1, s.n_max);
      s.actual_work = rng.uniform_int(1, 14);
      const Time at_max = s.setup_time + ceil_div(s.actual_work, s.n_max);
      s.runtime_estimate = at_max + rng.uniform_int(0, 4);
    } else {
      s.size = s.n_min = s.n_max = rng.uniform_int(1, in.system.capacity);
      const Time compute = rng.uniform_int(1, 9);
      s.actual_work = compute * s.size;
      s.runtime_estimate = s.setup_time + compute + rng.uniform_int(0, 4);
    }
    if (s.kind == JobKind::OnDemand) {
      NoticeProfile np;
      np.actual_arrival = s.submit_time;
      np.estimated_size = s.size;
      np.estimated_runtime = s.runtime_estimate;
      const Time lead = rng.uniform_int(3, 10);
      const double c = rng.uniform01();
      if (c < 0.25) {
        np.category = NoticeCategory::NoNotice;
        np.estimated_arrival = s.submit_time;
      } else if (c < 0.5) {
        np.category = NoticeCategory::Accurate;
        np.estimated_arrival = s.submit_time;
        np.notice_time = s.submit_time - lead;
      } else if (c < 0.75) {
        np.category = NoticeCategory::Early;
        const Time x = rng.uniform_int(1, lead - 1);
        np.notice_time = s.submit_time - x;
        np.estimated_arrival = *np.notice_time + lead;
      } else {
        np.category = NoticeCategory::Late;
        const Time d = rng.uniform_int(1, 6);
        np.estimated_arrival = s.submit_time - d;
        np.notice_time = np.estimated_arrival - lead;
      }
      s.notice = np;
    }
    in.jobs.push_back(s);
  }
  return in;
}

}  // namespace hybridsim
