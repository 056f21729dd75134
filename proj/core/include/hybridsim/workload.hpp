#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

/// One record of an ingested scheduler trace.
struct RawTraceJob {
  JobId job_id = 0;
  Time submit_time = 0;
  Time runtime_estimate = 0;
  Time actual_runtime = 0;
  Nodes size = 1;
  std::string project;

  bool operator==(const RawTraceJob&) const = default;
};

/// Fractions of on-demand jobs per notice category:
/// {NoNotice, Accurate, Early, Late}.
using NoticeMix = std::array<double, 4>;

/// Notice mixes W1..W5. W1..W4 put 70% into one category and 10% into each
/// of the others; W5 is uniform.
NoticeMix notice_mix_preset(int w);
NoticeMix parse_notice_mix(const std::string& name);

struct WorkloadConfig {
  Nodes capacity = 4392;
  double on_demand_fraction = 0.10;
  double rigid_fraction = 0.60;
  double malleable_fraction = 0.30;
  NoticeMix notice_mix = {0.25, 0.25, 0.25, 0.25};
  Time notice_lead_min = 900;
  Time notice_lead_max = 1800;
  Time late_window = 1800;
  double shrink_fraction = 0.20;
  double rigid_setup_min = 0.05;
  double rigid_setup_max = 0.10;
  double malleable_setup_min = 0.00;
  double malleable_setup_max = 0.05;
  double on_demand_setup_fraction = 0.0;
  double large_od_threshold = 0.5;  // fraction of capacity
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct SwfParseResult {
  std::vector<RawTraceJob> jobs;
  std::size_t comments = 0;
  std::size_t malformed = 0;
  std::size_t dropped = 0;  // size < 1 or runtime < 0
  std::size_t clamped = 0;  // runtime above estimate
};

/// Standard Workload Format reader. The group-id field becomes the project
/// label. Unreadable files throw std::runtime_error.
SwfParseResult parse_swf(const std::filesystem::path& path);
SwfParseResult parse_swf(std::istream& in);

struct GenerateResult {
  std::vector<JobSpec> jobs;
  std::vector<std::string> warnings;
};

/// Annotates a raw trace with job kinds, setup overheads, malleable bounds
/// and advance-notice profiles. Pure function of (raw, cfg).
GenerateResult generate_workload(const std::vector<RawTraceJob>& raw,
                                 const WorkloadConfig& cfg);

/// Largest-remainder apportionment of `total` items to `fractions`.
std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            const std::vector<double>& fractions);

// Native line-delimited JSON workload format.
inline constexpr int kNativeSchemaVersion = 1;

std::string to_native_line(const JobSpec& spec);
JobSpec from_native_line(const std::string& line, std::size_t line_no = 0);
void write_native(const std::filesystem::path& path, const std::vector<JobSpec>& jobs);
void write_native(std::ostream& out, const std::vector<JobSpec>& jobs);
std::vector<JobSpec> parse_native(const std::filesystem::path& path);
std::vector<JobSpec> parse_native(std::istream& in);

/// Job-count and node-hour distribution by kind and size range.
struct WorkloadSummary {
  std::map<JobKind, std::size_t> jobs_by_kind;
  std::map<JobKind, double> node_hours_by_kind;
  std::map<NoticeCategory, std::size_t> notices;
  std::map<std::string, std::size_t> jobs_by_size_range;
  std::map<std::string, double> node_hours_by_size_range;
};

WorkloadSummary summarize(const std::vector<JobSpec>& jobs, Nodes capacity);
void print_summary(std::ostream& out, const WorkloadSummary& summary);

/// On-demand job counts and requested node-hours per week since the first
/// submission.
struct WeeklyOnDemand {
  std::int64_t week = 0;
  std::size_t jobs = 0;
  double node_hours = 0.0;
};
std::vector<WeeklyOnDemand> weekly_on_demand(const std::vector<JobSpec>& jobs);

}  // namespace hybridsim
