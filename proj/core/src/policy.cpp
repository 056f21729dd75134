#include "hybridsim/policy.hpp"

#include <algorithm>

namespace hybridsim {

Time WaitingJob::duration(Nodes n) const {
  if (kind != JobKind::Malleable) return fixed_duration;
  return setup + ceil_div(est_work, n);
}

std::vector<WaitingJob> fcfs_order(std::vector<WaitingJob> waiting) {
  std::stable_sort(waiting.begin(), waiting.end(), [](const WaitingJob& a, const WaitingJob& b) {
    if (a.pinned != b.pinned) return a.pinned;
    if (a.pinned && a.pin_time != b.pin_time) return a.pin_time < b.pin_time;
    if (!a.pinned && a.first_submit != b.first_submit) return a.first_submit < b.first_submit;
    return a.id < b.id;
  });
  return waiting;
}

Time projected_start(Nodes free, std::vector<ExpectedRelease> releases, Time now, Nodes need,
                     Nodes* extra) {
  if (free >= need) {
    if (extra) *extra = free - need;
    return now;
  }
  std::sort(releases.begin(), releases.end(),
            [](const ExpectedRelease& a, const ExpectedRelease& b) { return a.est_end < b.est_end; });
  Nodes avail = free;
  for (std::size_t i = 0; i < releases.size(); ++i) {
    avail += releases[i].nodes;
    // all releases sharing this end time land together
    if (i + 1 < releases.size() && releases[i + 1].est_end == releases[i].est_end) continue;
    if (avail >= need) {
      if (extra) *extra = avail - need;
      return std::max(now, releases[i].est_end);
    }
  }
  if (extra) *extra = 0;
  return kNever;
}

PassResult easy_backfill(const QueueSnapshot& snap) {
  PassResult result;
  const auto order = fcfs_order(snap.waiting);
  Nodes free = snap.free;
  std::vector<ExpectedRelease> releases = snap.releases;

  std::size_t i = 0;
  for (; i < order.size(); ++i) {
    const WaitingJob& job = order[i];
    if (job.min_nodes > free) break;
    const Nodes n = std::min(job.max_nodes, free);
    result.starts.push_back({job.id, n, false, std::nullopt});
    releases.push_back({snap.now + job.duration(n), n});
    free -= n;
  }
  if (i == order.size()) return result;

  const WaitingJob& head = order[i];
  HeadReservation hr;
  hr.job = head.id;
  hr.nodes = head.min_nodes;
  hr.start = projected_start(free, releases, snap.now, head.min_nodes, &hr.extra);
  result.head = hr;
  Nodes extra = hr.extra;

  std::vector<IdleReservation> reserved = snap.reservations;
  std::stable_sort(reserved.begin(), reserved.end(),
                   [](const IdleReservation& a, const IdleReservation& b) {
                     return a.priority != b.priority ? a.priority < b.priority : a.owner < b.owner;
                   });

  for (std::size_t k = i + 1; k < order.size(); ++k) {
    const WaitingJob& job = order[k];
    bool started = false;
    if (job.min_nodes <= free) {
      const Nodes hi = std::min(job.max_nodes, free);
      if (hr.start == kNever || snap.now + job.duration(hi) <= hr.start) {
        result.starts.push_back({job.id, hi, true, std::nullopt});
        free -= hi;
        started = true;
      } else {
        const Nodes n = std::min(hi, extra);
        if (n >= job.min_nodes) {
          result.starts.push_back({job.id, n, true, std::nullopt});
          free -= n;
          extra -= n;
          started = true;
        }
      }
    }
    if (started || job.kind == JobKind::OnDemand) continue;
    for (auto& r : reserved) {
      if (r.idle >= job.min_nodes) {
        const Nodes n = std::min(job.max_nodes, r.idle);
        result.starts.push_back({job.id, n, true, r.owner});
        r.idle -= n;
        break;
      }
    }
  }
  return result;
}

}  // namespace hybridsim
