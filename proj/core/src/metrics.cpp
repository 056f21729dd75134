#include "hybridsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace hybridsim {

LatencyStats summarize_latency(std::vector<double> s) {
  LatencyStats out;
  out.samples = s.size();
  if (s.empty()) return out;
  std::sort(s.begin(), s.end());
  // nearest-rank percentiles
  auto rank = [&](double p) {
    const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(s.size())));
    return s[std::clamp<std::size_t>(k, 1, s.size()) - 1];
  };
  out.p50_ms = rank(0.50);
  out.p99_ms = rank(0.99);
  out.max_ms = s.back();
  return out;
}

double turnaround(const JobOutcome& job) {
  return static_cast<double>(job.finish - job.first_submit);
}

std::optional<double> average_turnaround(const std::vector<JobOutcome>& jobs,
                                         std::optional<JobKind> kind) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& j : jobs) {
    if (j.finish < 0 || (kind && j.kind != *kind)) continue;
    sum += turnaround(j);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> instant_start_rate(const std::vector<JobOutcome>& jobs) {
  std::size_t total = 0;
  std::size_t instant = 0;
  for (const auto& j : jobs) {
    if (j.kind != JobKind::OnDemand) continue;
    ++total;
    if (j.instant) ++instant;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(instant) / static_cast<double>(total);
}

double preemption_ratio(const std::vector<JobOutcome>& jobs, JobKind kind) {
  std::size_t total = 0;
  std::size_t hit = 0;
  for (const auto& j : jobs) {
    if (j.kind != kind) continue;
    ++total;
    if (j.preemptions > 0) ++hit;
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

namespace {
NodeSeconds counted_useful(const NodeSecondTotals& t, const SystemConfig& sys) {
  NodeSeconds u = t.useful;
  if (!sys.setup_counts_as_waste) u += t.setup;
  if (!sys.checkpoint_counts_as_waste) u += t.checkpoint_writes;
  return u;
}
}  // namespace

std::optional<double> system_utilization(const RunRecord& run, const SystemConfig& sys) {
  const NodeSeconds area = run.capacity * (run.horizon_end - run.horizon_start);
  if (area <= 0) return std::nullopt;
  return static_cast<double>(counted_useful(run.totals, sys)) / static_cast<double>(area);
}

MetricsReport compute_metrics(const RunRecord& run, const SystemConfig& sys,
                              const std::string& mechanism) {
  MetricsReport r;
  r.mechanism = mechanism;
  r.jobs = run.jobs.size();
  for (const auto& j : run.jobs) {
    switch (j.kind) {
      case JobKind::Rigid: ++r.rigid_jobs; break;
      case JobKind::Malleable: ++r.malleable_jobs; break;
      case JobKind::OnDemand: ++r.on_demand_jobs; break;
    }
    r.shrink_events += static_cast<std::size_t>(j.shrinks);
  }
  r.avg_turnaround = average_turnaround(run.jobs);
  r.avg_turnaround_rigid = average_turnaround(run.jobs, JobKind::Rigid);
  r.avg_turnaround_malleable = average_turnaround(run.jobs, JobKind::Malleable);
  r.avg_turnaround_on_demand = average_turnaround(run.jobs, JobKind::OnDemand);
  r.instant_start_rate = instant_start_rate(run.jobs);
  r.preemption_ratio_rigid = preemption_ratio(run.jobs, JobKind::Rigid);
  r.preemption_ratio_malleable = preemption_ratio(run.jobs, JobKind::Malleable);
  r.system_utilization = system_utilization(run, sys);

  const auto& t = run.totals;
  r.useful = t.useful;
  r.lost_compute = t.lost_compute;
  r.setup_replay = t.setup;
  r.checkpoint_writes = t.checkpoint_writes;
  r.drain_occupancy = t.drain_occupancy;
  r.completion_slack = t.completion_slack;
  const NodeSeconds area = run.capacity * (run.horizon_end - run.horizon_start);
  r.idle = area - t.allocated;
  if (area > 0) {
    r.waste_fraction =
        static_cast<double>(t.accounted() - counted_useful(t, sys)) / static_cast<double>(area);
    r.idle_fraction = static_cast<double>(r.idle) / static_cast<double>(area);
  }
  r.horizon_start = run.horizon_start;
  r.horizon_end = run.horizon_end;
  return r;
}

LogTurnaround turnaround_from_log(const EventLog& log, const std::vector<JobSpec>& jobs) {
  std::map<JobId, JobKind> kinds;
  for (const auto& j : jobs) kinds[j.id] = j.kind;
  std::map<JobId, Time> submit;
  std::map<JobId, Time> finish;
  for (const auto& r : log.records()) {
    if (r.kind == to_string(EventClass::JobSubmit) ||
        r.kind == to_string(EventClass::OnDemandArrival)) {
      submit.emplace(r.job, r.time);
    } else if (r.kind == to_string(EventClass::JobFinish)) {
      finish[r.job] = r.time;
    }
  }
  std::map<int, std::pair<double, std::size_t>> acc;  // -1 overall, else kind
  for (const auto& [id, f] : finish) {
    auto s = submit.find(id);
    auto k = kinds.find(id);
    if (s == submit.end() || k == kinds.end()) continue;
    const double ta = static_cast<double>(f - s->second);
    for (int key : {-1, static_cast<int>(k->second)}) {
      acc[key].first += ta;
      acc[key].second += 1;
    }
  }
  auto avg = [&](int key) -> std::optional<double> {
    auto it = acc.find(key);
    if (it == acc.end()) return std::nullopt;
    return it->second.first / static_cast<double>(it->second.second);
  };
  return {avg(-1), avg(static_cast<int>(JobKind::Rigid)), avg(static_cast<int>(JobKind::Malleable)),
          avg(static_cast<int>(JobKind::OnDemand))};
}

std::string format_number(std::optional<double> v) {
  if (!v) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, std::optional<double>>> metric_values(const MetricsReport& r) {
  auto d = [](auto x) { return std::optional<double>(static_cast<double>(x)); };
  return {
      {"jobs", d(r.jobs)},
      {"rigid_jobs", d(r.rigid_jobs)},
      {"malleable_jobs", d(r.malleable_jobs)},
      {"on_demand_jobs", d(r.on_demand_jobs)},
      {"avg_turnaround", r.avg_turnaround},
      {"avg_turnaround_rigid", r.avg_turnaround_rigid},
      {"avg_turnaround_malleable", r.avg_turnaround_malleable},
      {"avg_turnaround_on_demand", r.avg_turnaround_on_demand},
      {"instant_start_rate", r.instant_start_rate},
      {"preemption_ratio_rigid", d(r.preemption_ratio_rigid)},
      {"preemption_ratio_malleable", d(r.preemption_ratio_malleable)},
      {"system_utilization", r.system_utilization},
      {"waste_fraction", d(r.waste_fraction)},
      {"idle_fraction", d(r.idle_fraction)},
      {"useful_node_seconds", d(r.useful)},
      {"lost_compute", d(r.lost_compute)},
      {"setup_replay", d(r.setup_replay)},
      {"checkpoint_writes", d(r.checkpoint_writes)},
      {"drain_occupancy", d(r.drain_occupancy)},
      {"completion_slack", d(r.completion_slack)},
      {"idle_node_seconds", d(r.idle)},
      {"shrink_events", d(r.shrink_events)},
      {"horizon_start", d(r.horizon_start)},
      {"horizon_end", d(r.horizon_end)},
  };
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["mechanism"] = r.mechanism;
  for (const auto& [name, v] : metric_values(r)) {
    if (v) j[name] = *v;
    else j[name] = nullptr;
  }
  return j;
}

void write_csv(std::ostream& out, const MetricsReport& r) {
  out << "mechanism";
  const auto values = metric_values(r);
  for (const auto& [name, v] : values) out << ',' << name;
  out << "\r\n\"" << r.mechanism << '"';
  for (const auto& [name, v] : values) out << ',' << format_number(v);
  out << "\r\n";
}

void write_text(std::ostream& out, const MetricsReport& r) {
  auto show = [&](const char* label, std::optional<double> v, const char* unit = "",
                  int digits = 4) {
    out << "  " << label << ": ";
    if (v) {
      std::ostringstream f;
      f << std::fixed << std::setprecision(digits) << *v << unit;
      out << f.str();
    } else {
      out << "n/a";
    }
    out << '\n';
  };
  out << "mechanism " << r.mechanism << ", " << r.jobs << " jobs (" << r.rigid_jobs << " rigid, "
      << r.malleable_jobs << " malleable, " << r.on_demand_jobs << " on-demand)\n";
  show("avg turnaround", r.avg_turnaround, " s", 1);
  show("  rigid", r.avg_turnaround_rigid, " s", 1);
  show("  malleable", r.avg_turnaround_malleable, " s", 1);
  show("  on-demand", r.avg_turnaround_on_demand, " s", 1);
  show("instant start rate", r.instant_start_rate);
  show("preemption ratio rigid", r.preemption_ratio_rigid);
  show("preemption ratio malleable", r.preemption_ratio_malleable);
  show("system utilization", r.system_utilization);
  out << "  waste node-s: lost " << r.lost_compute << ", setup " << r.setup_replay
      << ", checkpoint " << r.checkpoint_writes << ", drain " << r.drain_occupancy << ", slack "
      << r.completion_slack << "\n  idle node-s: " << r.idle << "\n  shrink events: "
      << r.shrink_events << "\n  horizon: [" << r.horizon_start << ", " << r.horizon_end
      << "]\n";
}

}  // namespace hybridsim
