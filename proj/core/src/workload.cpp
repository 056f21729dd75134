#include "hybridsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hybridsim/random.hpp"

namespace hybridsim {

NoticeMix notice_mix_preset(int w) {
  switch (w) {
    case 1: return {0.70, 0.10, 0.10, 0.10};
    case 2: return {0.10, 0.70, 0.10, 0.10};
    case 3: return {0.10, 0.10, 0.70, 0.10};
    case 4: return {0.10, 0.10, 0.10, 0.70};
    case 5: return {0.25, 0.25, 0.25, 0.25};
    default: throw std::invalid_argument("notice mix must be W1..W5");
  }
}

NoticeMix parse_notice_mix(const std::string& name) {
  if (name.size() == 2 && (name[0] == 'W' || name[0] == 'w') && name[1] >= '1' &&
      name[1] <= '5') {
    return notice_mix_preset(name[1] - '0');
  }
  throw std::invalid_argument("unknown notice mix '" + name + "' (expected W1..W5)");
}

void WorkloadConfig::validate() const {
  auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  for (double f : {on_demand_fraction, rigid_fraction, malleable_fraction,
                   shrink_fraction, rigid_setup_min, rigid_setup_max,
                   malleable_setup_min, malleable_setup_max,
                   on_demand_setup_fraction, large_od_threshold}) {
    if (!in_unit(f)) throw std::invalid_argument("workload fractions must lie in [0,1]");
  }
  double mix = 0.0;
  for (double f : notice_mix) {
    if (!in_unit(f)) throw std::invalid_argument("notice mix entries must lie in [0,1]");
    mix += f;
  }
  if (std::abs(mix - 1.0) > 1e-9) throw std::invalid_argument("notice mix must sum to 1");
  if (std::abs(on_demand_fraction + rigid_fraction + malleable_fraction - 1.0) > 1e-9) {
    throw std::invalid_argument("project type fractions must sum to 1");
  }
  if (rigid_setup_min > rigid_setup_max || malleable_setup_min > malleable_setup_max) {
    throw std::invalid_argument("setup fraction ranges must be ordered");
  }
  if (notice_lead_min < 2 || notice_lead_min > notice_lead_max) {
    throw std::invalid_argument("notice lead range must be ordered and >= 2 s");
  }
  if (late_window < 1) throw std::invalid_argument("late_window must be >= 1 s");
}

// ---------------------------------------------------------------------------
// SWF

SwfParseResult parse_swf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SWF file " + path.string());
  return parse_swf(in);
}

SwfParseResult parse_swf(std::istream& in) {
  SwfParseResult result;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == ';') {
      ++result.comments;
      continue;
    }
    std::istringstream fields(line);
    std::vector<double> v;
    double x;
    while (fields >> x) v.push_back(x);
    if (!fields.eof() || v.size() != 18) {
      ++result.malformed;
      continue;
    }
    RawTraceJob job;
    job.job_id = static_cast<JobId>(v[0]);
    job.submit_time = static_cast<Time>(v[1]);
    job.actual_runtime = static_cast<Time>(v[3]);
    job.size = static_cast<Nodes>(v[4] > 0 ? v[4] : v[7]);
    job.runtime_estimate = static_cast<Time>(v[8] > 0 ? v[8] : v[3]);
    job.project = std::to_string(static_cast<long long>(v[12]));
    if (job.size < 1 || job.actual_runtime < 0) {
      ++result.dropped;
      continue;
    }
    if (job.actual_runtime > job.runtime_estimate) {
      job.actual_runtime = job.runtime_estimate;
      ++result.clamped;
    }
    result.jobs.push_back(std::move(job));
  }
  std::stable_sort(result.jobs.begin(), result.jobs.end(),
                   [](const RawTraceJob& a, const RawTraceJob& b) {
                     return a.submit_time < b.submit_time;
                   });
  return result;
}

// ---------------------------------------------------------------------------
// Generation

std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            const std::vector<double>& fractions) {
  const double sum = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  std::vector<std::int64_t> counts(fractions.size(), 0);
  if (total <= 0 || sum <= 0.0) return counts;
  std::vector<double> rem(fractions.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double quota = static_cast<double>(total) * fractions[i] / sum;
    counts[i] = static_cast<std::int64_t>(std::floor(quota));
    rem[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
    ++counts[order[k % order.size()]];
  }
  return counts;
}

namespace {

Time fraction_of(double frac, Time runtime) {
  return static_cast<Time>(std::llround(frac * static_cast<double>(runtime)));
}

NoticeProfile make_notice(Rng& rng, const WorkloadConfig& cfg, Time arrival,
                          Nodes size, Time estimate) {
  NoticeProfile n;
  n.actual_arrival = arrival;
  n.estimated_size = size;
  n.estimated_runtime = estimate;
  const double u = rng.uniform01();
  double acc = 0.0;
  int cat = 3;
  for (int i = 0; i < 4; ++i) {
    acc += cfg.notice_mix[static_cast<std::size_t>(i)];
    if (u < acc) {
      cat = i;
      break;
    }
  }
  while (cfg.notice_mix[static_cast<std::size_t>(cat)] <= 0.0 && cat > 0) --cat;
  n.category = static_cast<NoticeCategory>(cat);
  // Lead of the notice ahead of the predicted arrival. Every category draws
  // the same values so that notice mixes differ only in categories.
  const Time lead = rng.uniform_int(cfg.notice_lead_min, cfg.notice_lead_max);
  const Time offset = rng.uniform_int(1, lead - 1);
  const Time delay = rng.uniform_int(1, cfg.late_window);
  switch (n.category) {
    case NoticeCategory::NoNotice:
      n.estimated_arrival = arrival;
      break;
    case NoticeCategory::Accurate:
      n.estimated_arrival = arrival;
      n.notice_time = arrival - lead;
      break;
    case NoticeCategory::Early: {
      n.notice_time = arrival - offset;
      n.estimated_arrival = *n.notice_time + lead;
      break;
    }
    case NoticeCategory::Late: {
      n.estimated_arrival = arrival - delay;
      n.notice_time = n.estimated_arrival - lead;
      break;
    }
  }
  return n;
}

}  // namespace

GenerateResult generate_workload(const std::vector<RawTraceJob>& raw_in,
                                 const WorkloadConfig& cfg) {
  cfg.validate();
  GenerateResult out;
  if (raw_in.empty()) {
    out.warnings.push_back("empty trace");
    return out;
  }
  std::vector<RawTraceJob> raw = raw_in;
  std::stable_sort(raw.begin(), raw.end(), [](const RawTraceJob& a, const RawTraceJob& b) {
    return a.submit_time != b.submit_time ? a.submit_time < b.submit_time
                                          : a.job_id < b.job_id;
  });

  Rng rng(cfg.rng_seed);

  std::set<std::string> labels;
  for (const auto& j : raw) labels.insert(j.project);
  std::vector<std::string> projects(labels.begin(), labels.end());
  rng.shuffle(projects.begin(), projects.end());

  const auto counts = largest_remainder(
      static_cast<std::int64_t>(projects.size()),
      {cfg.on_demand_fraction, cfg.rigid_fraction, cfg.malleable_fraction});
  const double fracs[3] = {cfg.on_demand_fraction, cfg.rigid_fraction,
                           cfg.malleable_fraction};
  for (int i = 0; i < 3; ++i) {
    const double want = fracs[i] * static_cast<double>(projects.size());
    if (std::abs(want - static_cast<double>(counts[static_cast<std::size_t>(i)])) >= 1.0 ||
        (fracs[i] > 0.0 && counts[static_cast<std::size_t>(i)] == 0)) {
      out.warnings.push_back("too few projects to realize type fractions exactly");
      break;
    }
  }
  std::map<std::string, JobKind> kind_of;
  for (std::size_t i = 0; i < projects.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i);
    JobKind kind = JobKind::Malleable;
    if (k < counts[0]) kind = JobKind::OnDemand;
    else if (k < counts[0] + counts[1]) kind = JobKind::Rigid;
    kind_of[projects[i]] = kind;
  }

  const double od_limit = cfg.large_od_threshold * static_cast<double>(cfg.capacity);
  std::size_t clamped = 0;
  std::size_t reassigned = 0;
  out.jobs.reserve(raw.size());
  for (const auto& r : raw) {
    JobSpec s;
    s.id = r.job_id;
    s.submit_time = r.submit_time;
    s.project = r.project;
    s.kind = kind_of.at(r.project);
    Nodes size = r.size;
    if (size > cfg.capacity) {
      size = cfg.capacity;
      ++clamped;
    }
    if (s.kind == JobKind::OnDemand && static_cast<double>(size) > od_limit) {
      s.kind = rng.bernoulli(0.5) ? JobKind::Rigid : JobKind::Malleable;
      ++reassigned;
    }
    const Time runtime = std::max<Time>(1, r.actual_runtime);
    s.runtime_estimate = std::max(runtime, r.runtime_estimate);
    s.size = size;
    switch (s.kind) {
      case JobKind::Rigid: {
        s.setup_time = fraction_of(rng.uniform(cfg.rigid_setup_min, cfg.rigid_setup_max), runtime);
        s.setup_time = std::min(s.setup_time, runtime - 1);
        s.n_min = s.n_max = size;
        s.actual_work = (runtime - s.setup_time) * size;
        break;
      }
      case JobKind::Malleable: {
        s.setup_time =
            fraction_of(rng.uniform(cfg.malleable_setup_min, cfg.malleable_setup_max), runtime);
        s.setup_time = std::min(s.setup_time, runtime - 1);
        s.n_max = size;
        s.n_min = std::max<Nodes>(
            1, static_cast<Nodes>(std::ceil(cfg.shrink_fraction * static_cast<double>(size) - 1e-9)));
        s.actual_work = derive_t_single(runtime, s.setup_time, size);
        break;
      }
      case JobKind::OnDemand: {
        s.setup_time = std::min(fraction_of(cfg.on_demand_setup_fraction, runtime), runtime - 1);
        s.n_min = s.n_max = size;
        s.actual_work = (runtime - s.setup_time) * size;
        s.notice = make_notice(rng, cfg, r.submit_time, size, s.runtime_estimate);
        break;
      }
    }
    out.jobs.push_back(std::move(s));
  }
  if (clamped > 0) {
    out.warnings.push_back(std::to_string(clamped) + " jobs larger than the system were clamped");
  }
  if (reassigned > 0) {
    out.warnings.push_back(std::to_string(reassigned) +
                           " oversized on-demand jobs reassigned to rigid/malleable");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Native format

namespace {

const nlohmann::json& need(const nlohmann::json& j, const char* field, std::size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": missing field '" +
                             field + "'");
  }
  return *it;
}

}  // namespace

std::string to_native_line(const JobSpec& s) {
  nlohmann::json j;
  j["schema_version"] = kNativeSchemaVersion;
  j["job_id"] = s.id;
  j["submit_time"] = s.submit_time;
  j["kind"] = std::string(to_string(s.kind));
  j["size"] = s.size;
  j["n_min"] = s.n_min;
  j["n_max"] = s.n_max;
  j["runtime_estimate"] = s.runtime_estimate;
  j["actual_work"] = s.actual_work;
  j["setup_time"] = s.setup_time;
  j["project"] = s.project;
  if (s.notice) {
    const auto& n = *s.notice;
    nlohmann::json nj;
    nj["category"] = std::string(to_string(n.category));
    if (n.notice_time) nj["notice_time"] = *n.notice_time;
    nj["estimated_arrival"] = n.estimated_arrival;
    nj["actual_arrival"] = n.actual_arrival;
    nj["estimated_size"] = n.estimated_size;
    nj["estimated_runtime"] = n.estimated_runtime;
    j["notice"] = std::move(nj);
  }
  return j.dump();
}

JobSpec from_native_line(const std::string& line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
  }
  try {
    const int version = need(j, "schema_version", line_no).get<int>();
    if (version != kNativeSchemaVersion) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": unsupported schema_version " + std::to_string(version));
    }
    JobSpec s;
    s.id = need(j, "job_id", line_no).get<JobId>();
    s.submit_time = need(j, "submit_time", line_no).get<Time>();
    s.kind = parse_job_kind(need(j, "kind", line_no).get<std::string>());
    s.size = need(j, "size", line_no).get<Nodes>();
    if (s.kind == JobKind::Malleable) {
      s.n_min = need(j, "n_min", line_no).get<Nodes>();
      s.n_max = need(j, "n_max", line_no).get<Nodes>();
    } else {
      s.n_min = j.value("n_min", s.size);
      s.n_max = j.value("n_max", s.size);
    }
    s.runtime_estimate = need(j, "runtime_estimate", line_no).get<Time>();
    s.actual_work = need(j, "actual_work", line_no).get<NodeSeconds>();
    s.setup_time = need(j, "setup_time", line_no).get<Time>();
    s.project = j.value("project", std::string{});
    if (s.kind == JobKind::OnDemand) {
      const auto& nj = need(j, "notice", line_no);
      NoticeProfile n;
      n.category = parse_notice_category(need(nj, "category", line_no).get<std::string>());
      if (nj.contains("notice_time")) n.notice_time = nj["notice_time"].get<Time>();
      n.estimated_arrival = need(nj, "estimated_arrival", line_no).get<Time>();
      n.actual_arrival = need(nj, "actual_arrival", line_no).get<Time>();
      n.estimated_size = need(nj, "estimated_size", line_no).get<Nodes>();
      n.estimated_runtime = need(nj, "estimated_runtime", line_no).get<Time>();
      s.notice = n;
    }
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
  }
}

void write_native(std::ostream& out, const std::vector<JobSpec>& jobs) {
  for (const auto& s : jobs) out << to_native_line(s) << '\n';
}

void write_native(const std::filesystem::path& path, const std::vector<JobSpec>& jobs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_native(out, jobs);
}

std::vector<JobSpec> parse_native(std::istream& in) {
  std::vector<JobSpec> jobs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    jobs.push_back(from_native_line(line, line_no));
  }
  return jobs;
}

std::vector<JobSpec> parse_native(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload " + path.string());
  return parse_native(in);
}

// ---------------------------------------------------------------------------
// Summaries

namespace {
std::string size_range(Nodes size, Nodes capacity) {
  const double f = static_cast<double>(size) / static_cast<double>(capacity);
  if (f <= 0.05) return "<=5%";
  if (f <= 0.10) return "5-10%";
  if (f <= 0.25) return "10-25%";
  if (f <= 0.50) return "25-50%";
  return ">50%";
}
}  // namespace

WorkloadSummary summarize(const std::vector<JobSpec>& jobs, Nodes capacity) {
  WorkloadSummary s;
  for (const auto& j : jobs) {
    const double nh = static_cast<double>(j.actual_work + j.setup_time * j.size) / 3600.0;
    ++s.jobs_by_kind[j.kind];
    s.node_hours_by_kind[j.kind] += nh;
    const auto range = size_range(j.size, capacity);
    ++s.jobs_by_size_range[range];
    s.node_hours_by_size_range[range] += nh;
    if (j.notice) ++s.notices[j.notice->category];
  }
  return s;
}

void print_summary(std::ostream& out, const WorkloadSummary& s) {
  std::size_t total = 0;
  double total_nh = 0.0;
  for (auto& [k, n] : s.jobs_by_kind) total += n;
  for (auto& [k, h] : s.node_hours_by_kind) total_nh += h;
  out << "kind         jobs    share   node-hours  share\n";
  for (auto kind : {JobKind::Rigid, JobKind::Malleable, JobKind::OnDemand}) {
    const auto jit = s.jobs_by_kind.find(kind);
    const auto hit = s.node_hours_by_kind.find(kind);
    const std::size_t n = jit == s.jobs_by_kind.end() ? 0 : jit->second;
    const double h = hit == s.node_hours_by_kind.end() ? 0.0 : hit->second;
    out << std::left << std::setw(12) << to_string(kind) << std::right << std::setw(6) << n
        << std::setw(8) << std::fixed << std::setprecision(1)
        << (total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0) << "%"
        << std::setw(13) << std::setprecision(0) << h << std::setw(6) << std::setprecision(1)
        << (total_nh > 0 ? 100.0 * h / total_nh : 0.0) << "%\n";
  }
  out << "size range   jobs    node-hours\n";
  for (const char* range : {"<=5%", "5-10%", "10-25%", "25-50%", ">50%"}) {
    const auto it = s.jobs_by_size_range.find(range);
    if (it == s.jobs_by_size_range.end()) continue;
    out << std::left << std::setw(12) << range << std::right << std::setw(6) << it->second
        << std::setw(13) << std::setprecision(0) << s.node_hours_by_size_range.at(range)
        << "\n";
  }
  if (!s.notices.empty()) {
    out << "notice categories:";
    for (const auto& [c, n] : s.notices) out << " " << to_string(c) << "=" << n;
    out << "\n";
  }
}

std::vector<WeeklyOnDemand> weekly_on_demand(const std::vector<JobSpec>& jobs) {
  std::vector<WeeklyOnDemand> weeks;
  if (jobs.empty()) return weeks;
  Time t0 = jobs.front().submit_time;
  Time t1 = t0;
  for (const auto& j : jobs) {
    t0 = std::min(t0, j.submit_time);
    t1 = std::max(t1, j.submit_time);
  }
  constexpr Time kWeek = 7 * 24 * 3600;
  weeks.resize(static_cast<std::size_t>((t1 - t0) / kWeek + 1));
  for (std::size_t i = 0; i < weeks.size(); ++i) weeks[i].week = static_cast<std::int64_t>(i);
  for (const auto& j : jobs) {
    if (j.kind != JobKind::OnDemand) continue;
    auto& w = weeks[static_cast<std::size_t>((j.submit_time - t0) / kWeek)];
    ++w.jobs;
    w.node_hours += static_cast<double>(j.actual_work + j.setup_time * j.size) / 3600.0;
  }
  return weeks;
}

}  // namespace hybridsim
