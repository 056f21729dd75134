#include "settings.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace hybridsim::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* section, std::set<std::string> known) {
  if (!j.is_object()) throw std::runtime_error(std::string(section) + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) {
      throw std::runtime_error(std::string("unknown key '") + section + "." + k + "'");
    }
  }
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json workload_json(const WorkloadConfig& w) {
  return {{"on_demand_fraction", w.on_demand_fraction},
          {"rigid_fraction", w.rigid_fraction},
          {"malleable_fraction", w.malleable_fraction},
          {"notice_mix", w.notice_mix},
          {"notice_lead_min", w.notice_lead_min},
          {"notice_lead_max", w.notice_lead_max},
          {"late_window", w.late_window},
          {"shrink_fraction", w.shrink_fraction},
          {"rigid_setup_min", w.rigid_setup_min},
          {"rigid_setup_max", w.rigid_setup_max},
          {"malleable_setup_min", w.malleable_setup_min},
          {"malleable_setup_max", w.malleable_setup_max},
          {"on_demand_setup_fraction", w.on_demand_setup_fraction},
          {"large_od_threshold", w.large_od_threshold}};
}

void workload_from(const json& j, WorkloadConfig& w) {
  check_keys(j, "workload",
             {"on_demand_fraction", "rigid_fraction", "malleable_fraction", "notice_mix",
              "notice_lead_min", "notice_lead_max", "late_window", "shrink_fraction",
              "rigid_setup_min", "rigid_setup_max", "malleable_setup_min", "malleable_setup_max",
              "on_demand_setup_fraction", "large_od_threshold"});
  take(j, "on_demand_fraction", w.on_demand_fraction);
  take(j, "rigid_fraction", w.rigid_fraction);
  take(j, "malleable_fraction", w.malleable_fraction);
  if (j.contains("notice_mix")) {
    const auto& m = j.at("notice_mix");
    if (m.is_string()) w.notice_mix = parse_notice_mix(m.get<std::string>());
    else w.notice_mix = m.get<NoticeMix>();
  }
  take(j, "notice_lead_min", w.notice_lead_min);
  take(j, "notice_lead_max", w.notice_lead_max);
  take(j, "late_window", w.late_window);
  take(j, "shrink_fraction", w.shrink_fraction);
  take(j, "rigid_setup_min", w.rigid_setup_min);
  take(j, "rigid_setup_max", w.rigid_setup_max);
  take(j, "malleable_setup_min", w.malleable_setup_min);
  take(j, "malleable_setup_max", w.malleable_setup_max);
  take(j, "on_demand_setup_fraction", w.on_demand_setup_fraction);
  take(j, "large_od_threshold", w.large_od_threshold);
}

json trace_json(const SyntheticTraceConfig& t) {
  return {{"jobs", t.jobs},
          {"projects", t.projects},
          {"offered_load", t.offered_load},
          {"min_size", t.min_size},
          {"min_runtime", t.min_runtime},
          {"max_runtime", t.max_runtime},
          {"project_weight_sigma", t.project_weight_sigma},
          {"estimate_slack_max", t.estimate_slack_max}};
}

void trace_from(const json& j, SyntheticTraceConfig& t) {
  check_keys(j, "trace",
             {"jobs", "projects", "offered_load", "min_size", "min_runtime", "max_runtime",
              "project_weight_sigma", "estimate_slack_max"});
  take(j, "jobs", t.jobs);
  take(j, "projects", t.projects);
  take(j, "offered_load", t.offered_load);
  take(j, "min_size", t.min_size);
  take(j, "min_runtime", t.min_runtime);
  take(j, "max_runtime", t.max_runtime);
  take(j, "project_weight_sigma", t.project_weight_sigma);
  take(j, "estimate_slack_max", t.estimate_slack_max);
}

}  // namespace

MechanismConfig Settings::mechanism_config() const {
  MechanismConfig m = parse_mechanism(mechanism);
  m.warning_duration = warning_duration;
  m.cup_checkpoint_aligned = cup_checkpoint_aligned;
  return m;
}

std::vector<JobSpec> Settings::synthetic_jobs(std::uint64_t s) const {
  SyntheticTraceConfig t = trace;
  t.capacity = system.capacity;
  t.seed = s;
  WorkloadConfig w = workload;
  w.rng_seed = s;
  return synthetic_workload(t, w);
}

void apply_json(const json& j, Settings& s) {
  check_keys(j, "config", {"system", "workload", "trace", "mechanism", "run"});
  if (j.contains("system")) {
    check_keys(j.at("system"), "system",
               {"capacity", "mtbf", "checkpoint_cost_small", "checkpoint_cost_large",
                "checkpoint_node_threshold", "checkpoint_scale", "reservation_grace",
                "setup_counts_as_waste", "checkpoint_counts_as_waste"});
    from_json(j.at("system"), s.system);
  }
  if (j.contains("workload")) workload_from(j.at("workload"), s.workload);
  if (j.contains("trace")) trace_from(j.at("trace"), s.trace);
  if (j.contains("mechanism")) {
    const auto& m = j.at("mechanism");
    check_keys(m, "mechanism", {"name", "warning_duration", "cup_checkpoint_aligned"});
    take(m, "name", s.mechanism);
    take(m, "warning_duration", s.warning_duration);
    take(m, "cup_checkpoint_aligned", s.cup_checkpoint_aligned);
  }
  if (j.contains("run")) {
    const auto& r = j.at("run");
    check_keys(r, "run", {"seed", "threads"});
    take(r, "seed", s.seed);
    take(r, "threads", s.threads);
  }
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  Settings s;
  try {
    apply_json(json::parse(in), s);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return s;
}

json to_json(const Settings& s) {
  json sys = s.system;
  return {{"system", sys},
          {"workload", workload_json(s.workload)},
          {"trace", trace_json(s.trace)},
          {"mechanism",
           {{"name", s.mechanism},
            {"warning_duration", s.warning_duration},
            {"cup_checkpoint_aligned", s.cup_checkpoint_aligned}}},
          {"run", {{"seed", s.seed}, {"threads", s.threads}}}};
}

}  // namespace hybridsim::cli
