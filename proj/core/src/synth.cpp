#include "hybridsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hybridsim/random.hpp"

namespace hybridsim {

namespace {
struct ProjectProfile {
  double weight;
  double size_exp;      // preferred log2 size
  double log_runtime;   // median log runtime
};
}  // namespace

std::vector<RawTraceJob> synthesize_trace(const SyntheticTraceConfig& cfg) {
  if (cfg.jobs == 0) return {};
  if (cfg.projects == 0 || cfg.capacity < 1 || cfg.min_size < 1 ||
      cfg.min_size > cfg.capacity || !(cfg.offered_load > 0.0)) {
    throw std::invalid_argument("invalid synthetic trace configuration");
  }
  Rng rng(cfg.seed);
  const double lo_exp = std::log2(static_cast<double>(cfg.min_size));
  const double hi_exp = std::log2(static_cast<double>(cfg.capacity));
  const double lo_rt = std::log(static_cast<double>(cfg.min_runtime));
  const double hi_rt = std::log(static_cast<double>(cfg.max_runtime));

  std::vector<ProjectProfile> profiles(cfg.projects);
  double total_weight = 0.0;
  for (auto& p : profiles) {
    p.weight = std::exp(cfg.project_weight_sigma * rng.normal());
    // Most projects run small jobs; capability projects are rarer.
    p.size_exp = lo_exp + (hi_exp - lo_exp) * std::pow(rng.uniform01(), 1.6);
    p.log_runtime = rng.uniform(lo_rt + 0.3 * (hi_rt - lo_rt), hi_rt - 0.1 * (hi_rt - lo_rt));
    total_weight += p.weight;
  }
  std::vector<double> cumulative(profiles.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    acc += profiles[i].weight / total_weight;
    cumulative[i] = acc;
  }

  std::vector<RawTraceJob> jobs(cfg.jobs);
  double node_seconds = 0.0;
  for (std::size_t i = 0; i < cfg.jobs; ++i) {
    const double u = rng.uniform01();
    const auto pidx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                     cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(profiles.size()) - 1));
    const auto& p = profiles[pidx];
    RawTraceJob& j = jobs[i];
    j.job_id = static_cast<JobId>(i + 1);
    j.project = "p" + std::to_string(pidx);
    const double e = std::clamp(std::round(p.size_exp + rng.uniform(-1.0, 1.0)), lo_exp, hi_exp);
    j.size = std::clamp<Nodes>(static_cast<Nodes>(std::llround(std::exp2(e))), cfg.min_size,
                               cfg.capacity);
    const double rt = std::exp(std::clamp(p.log_runtime + 0.6 * rng.normal(), lo_rt, hi_rt));
    j.actual_runtime = std::clamp<Time>(static_cast<Time>(std::llround(rt)), cfg.min_runtime,
                                        cfg.max_runtime);
    const double slack = rng.uniform(1.0, cfg.estimate_slack_max);
    j.runtime_estimate = std::clamp<Time>(
        static_cast<Time>(std::llround(static_cast<double>(j.actual_runtime) * slack)),
        j.actual_runtime, std::max(cfg.max_runtime, j.actual_runtime));
    node_seconds += static_cast<double>(j.size) * static_cast<double>(j.actual_runtime);
  }
  // Arrivals uniform over a horizon sized for the requested offered load.
  const double horizon =
      node_seconds / (cfg.offered_load * static_cast<double>(cfg.capacity));
  std::vector<Time> submits(cfg.jobs);
  for (auto& t : submits) t = static_cast<Time>(std::floor(rng.uniform01() * horizon));
  std::sort(submits.begin(), submits.end());
  for (std::size_t i = 0; i < cfg.jobs; ++i) jobs[i].submit_time = submits[i];
  return jobs;
}

std::vector<JobSpec> synthetic_workload(const SyntheticTraceConfig& trace, WorkloadConfig cfg) {
  cfg.capacity = trace.capacity;
  return generate_workload(synthesize_trace(trace), cfg).jobs;
}

}  // namespace hybridsim
