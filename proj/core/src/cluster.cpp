#include "hybridsim/cluster.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace hybridsim {

namespace {
[[noreturn]] void fail(const std::string& what) { throw InvariantViolation("ledger: " + what); }
}  // namespace

ClusterLedger::ClusterLedger(Nodes capacity) : capacity_(capacity), free_(capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
}

Nodes ClusterLedger::allocated(JobId job) const {
  auto it = allocations_.find(job);
  return it == allocations_.end() ? 0 : it->second;
}

const ReservationState* ClusterLedger::reservation(JobId owner) const {
  auto it = reservations_.find(owner);
  return it == reservations_.end() ? nullptr : &it->second;
}

std::optional<JobId> ClusterLedger::backfill_owner(JobId job) const {
  auto it = backfill_links_.find(job);
  if (it == backfill_links_.end()) return std::nullopt;
  return it->second;
}

std::vector<JobId> ClusterLedger::backfilled_on(JobId owner) const {
  std::vector<JobId> out;
  for (const auto& [job, o] : backfill_links_) {
    if (o == owner) out.push_back(job);
  }
  return out;
}

bool ClusterLedger::allocate(JobId job, Nodes n) {
  if (n < 0) fail("negative allocation");
  if (n == 0) return true;
  if (n > free_) return false;
  if (reservations_.contains(job)) fail("reservation owner allocated from free pool");
  free_ -= n;
  allocations_[job] += n;
  allocated_total_ += n;
  after("allocate", job, n);
  return true;
}

Nodes ClusterLedger::release(JobId job, Nodes n, std::optional<JobId> beneficiary) {
  if (beneficiary) {
    const JobId b = *beneficiary;
    return release(job, n, std::span<const JobId>(&b, 1));
  }
  return release(job, n, std::span<const JobId>{});
}

Nodes ClusterLedger::release(JobId job, Nodes n, std::span<const JobId> beneficiaries) {
  if (n < 0) fail("negative release");
  if (n == 0) return 0;
  auto it = allocations_.find(job);
  if (it == allocations_.end() || it->second < n) {
    fail("over-release by job " + std::to_string(job));
  }
  it->second -= n;
  allocated_total_ -= n;
  const bool gone = it->second == 0;
  if (gone) allocations_.erase(it);

  auto link = backfill_links_.find(job);
  if (link != backfill_links_.end()) {
    auto& r = reservations_.at(link->second);
    r.occupied -= n;
    occupied_total_ -= n;
    if (gone) backfill_links_.erase(link);
    after("release-to-reservation", job, n);
    return 0;
  }

  Nodes left = n;
  for (JobId owner : beneficiaries) {
    if (left == 0) break;
    auto rit = reservations_.find(owner);
    if (rit == reservations_.end()) continue;
    const Nodes bank = std::min(left, std::max<Nodes>(0, rit->second.unfilled()));
    rit->second.held += bank;
    held_total_ += bank;
    left -= bank;
  }
  free_ += left;
  after("release", job, n);
  return left;
}

void ClusterLedger::open_reservation(JobId owner, Nodes target, std::optional<Time> expiry,
                                     Time priority) {
  if (target < 0 || target > capacity_) fail("reservation target out of range");
  if (reservations_.contains(owner)) fail("duplicate reservation");
  if (backfill_links_.contains(owner)) fail("backfilled job cannot own a reservation");
  ReservationState r;
  r.owner = owner;
  r.target = target;
  r.expiry = expiry;
  r.priority = priority;
  reservations_.emplace(owner, r);
  after("open", owner, target);
}

Nodes ClusterLedger::reserve_available(JobId owner, Nodes want) {
  auto& r = reservations_.at(owner);
  const Nodes n = std::max<Nodes>(0, std::min({free_, want, r.unfilled()}));
  if (n == 0) return 0;
  free_ -= n;
  r.held += n;
  held_total_ += n;
  after("reserve", owner, n);
  return n;
}

bool ClusterLedger::backfill_on_reserved(JobId job, JobId owner, Nodes n) {
  auto it = reservations_.find(owner);
  if (it == reservations_.end() || n <= 0 || it->second.idle() < n) return false;
  if (allocations_.contains(job)) fail("backfilled job already holds nodes");
  it->second.occupied += n;
  occupied_total_ += n;
  allocations_[job] = n;
  allocated_total_ += n;
  backfill_links_[job] = owner;
  after("backfill-on-reserved", job, n);
  return true;
}

std::vector<JobId> ClusterLedger::evict_backfilled(JobId owner) {
  std::vector<JobId> evicted = backfilled_on(owner);
  for (JobId job : evicted) release(job, allocated(job), std::span<const JobId>{});
  return evicted;
}

Nodes ClusterLedger::consume_reservation(JobId owner, Nodes n) {
  auto it = reservations_.find(owner);
  if (it == reservations_.end()) fail("no reservation to consume");
  ReservationState& r = it->second;
  if (n < 0 || r.occupied != 0 || r.held < n) {
    fail("owner takes more than its idle reserved nodes");
  }
  const Nodes surplus = r.held - n;
  held_total_ -= r.held;
  free_ += surplus;
  reservations_.erase(it);
  allocations_[owner] += n;
  allocated_total_ += n;
  after("consume", owner, n);
  return surplus;
}

Nodes ClusterLedger::dissolve_reservation(JobId owner) {
  auto it = reservations_.find(owner);
  if (it == reservations_.end()) return 0;
  const ReservationState r = it->second;
  for (auto l = backfill_links_.begin(); l != backfill_links_.end();) {
    if (l->second == owner) l = backfill_links_.erase(l);
    else ++l;
  }
  held_total_ -= r.held;
  occupied_total_ -= r.occupied;
  free_ += r.idle();
  reservations_.erase(it);
  after("dissolve", owner, r.idle());
  return r.idle();
}

void ClusterLedger::check() const {
  if (free_ < 0 || allocated_total_ < 0 || held_total_ < occupied_total_ || occupied_total_ < 0) {
    fail("negative count");
  }
  if (free_ + allocated_total_ + (held_total_ - occupied_total_) != capacity_) {
    fail("conservation broken: free " + std::to_string(free_) + " allocated " +
         std::to_string(allocated_total_) + " idle reserved " +
         std::to_string(held_total_ - occupied_total_) + " capacity " +
         std::to_string(capacity_));
  }
}

void ClusterLedger::audit() const {
  Nodes alloc = 0;
  for (const auto& [job, n] : allocations_) {
    if (n <= 0) fail("non-positive allocation for job " + std::to_string(job));
    if (reservations_.contains(job)) {
      fail("job " + std::to_string(job) + " both allocated and owning a reservation");
    }
    alloc += n;
  }
  Nodes held = 0;
  Nodes occupied = 0;
  for (const auto& [owner, r] : reservations_) {
    if (r.held < 0 || r.occupied < 0 || r.occupied > r.held) fail("bad reservation counts");
    if (backfill_links_.contains(owner)) fail("owner is backfilled");
    Nodes linked = 0;
    for (const auto& [job, o] : backfill_links_) {
      if (o == owner) linked += allocated(job);
    }
    if (linked != r.occupied) fail("occupied count mismatch");
    held += r.held;
    occupied += r.occupied;
  }
  if (alloc != allocated_total_ || held != held_total_ || occupied != occupied_total_) {
    fail("cached totals diverged");
  }
  check();
}

void ClusterLedger::after(const char* op, JobId job, Nodes n) {
  if (paranoid_) audit();
  else check();
  if (audit_log_ != nullptr) {
    *audit_log_ << now_ << ',' << op << ',' << job << ',' << n << ',' << free_ << ','
                << allocated_total_ << ',' << held_total_ << ',' << occupied_total_ << '\n';
  }
}

}  // namespace hybridsim
