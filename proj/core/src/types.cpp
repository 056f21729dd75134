#include "hybridsim/types.hpp"

#include <string>

namespace hybridsim {

std::string_view to_string(JobKind kind) {
  switch (kind) {
    case JobKind::Rigid: return "Rigid";
    case JobKind::OnDemand: return "OnDemand";
    case JobKind::Malleable: return "Malleable";
  }
  return "?";
}

std::string_view to_string(NoticeCategory category) {
  switch (category) {
    case NoticeCategory::NoNotice: return "NoNotice";
    case NoticeCategory::Accurate: return "Accurate";
    case NoticeCategory::Early: return "Early";
    case NoticeCategory::Late: return "Late";
  }
  return "?";
}

JobKind parse_job_kind(std::string_view text) {
  if (text == "Rigid") return JobKind::Rigid;
  if (text == "OnDemand") return JobKind::OnDemand;
  if (text == "Malleable") return JobKind::Malleable;
  throw std::invalid_argument("unknown job kind '" + std::string(text) + "'");
}

NoticeCategory parse_notice_category(std::string_view text) {
  if (text == "NoNotice") return NoticeCategory::NoNotice;
  if (text == "Accurate") return NoticeCategory::Accurate;
  if (text == "Early") return NoticeCategory::Early;
  if (text == "Late") return NoticeCategory::Late;
  throw std::invalid_argument("unknown notice category '" + std::string(text) + "'");
}

NodeSeconds derive_t_single(Time runtime_at_max, Time setup, Nodes n_max) {
  return (runtime_at_max - setup) * n_max;
}

Time malleable_runtime(NodeSeconds work, Nodes n, Time setup) {
  return ceil_div(work, n) + setup;
}

namespace {
void require(bool ok, const JobSpec& spec, const char* what) {
  if (!ok) {
    throw std::invalid_argument("job " + std::to_string(spec.id) + ": " + what);
  }
}
}  // namespace

void validate(const JobSpec& spec) {
  require(spec.n_min >= 1, spec, "n_min must be >= 1");
  require(spec.n_min <= spec.n_max, spec, "n_min must not exceed n_max");
  require(spec.size >= 1, spec, "size must be >= 1");
  require(spec.setup_time >= 0, spec, "setup_time must be >= 0");
  require(spec.actual_work >= 0, spec, "actual_work must be >= 0");
  require(spec.setup_time + (spec.actual_work > 0 ? 1 : 0) >= 1, spec,
          "job must occupy at least one second");
  switch (spec.kind) {
    case JobKind::Malleable:
      require(spec.size == spec.n_max, spec, "malleable size must equal n_max");
      break;
    case JobKind::OnDemand:
      require(spec.notice.has_value(), spec, "on-demand job needs a notice profile");
      require(spec.notice->actual_arrival == spec.submit_time, spec,
              "on-demand actual_arrival must equal submit_time");
      [[fallthrough]];
    case JobKind::Rigid:
      require(spec.n_min == spec.size && spec.n_max == spec.size, spec,
              "fixed-size job must have n_min == n_max == size");
      require(spec.actual_work % spec.size == 0, spec,
              "fixed-size job work must be a whole number of seconds");
      break;
  }
  if (spec.kind != JobKind::OnDemand) {
    require(!spec.notice.has_value(), spec, "only on-demand jobs carry notices");
    return;
  }
  const NoticeProfile& n = *spec.notice;
  switch (n.category) {
    case NoticeCategory::NoNotice:
      require(!n.notice_time, spec, "NoNotice profile must not have a notice_time");
      require(n.estimated_arrival == n.actual_arrival, spec,
              "NoNotice estimated_arrival must equal actual_arrival");
      break;
    case NoticeCategory::Accurate:
      require(n.notice_time && *n.notice_time < n.actual_arrival, spec,
              "Accurate notice must precede arrival");
      require(n.estimated_arrival == n.actual_arrival, spec,
              "Accurate notice must predict the arrival exactly");
      break;
    case NoticeCategory::Early:
      require(n.notice_time && *n.notice_time < n.actual_arrival &&
                  n.actual_arrival < n.estimated_arrival,
              spec, "Early profile needs notice < actual < estimated");
      break;
    case NoticeCategory::Late:
      require(n.notice_time && *n.notice_time < n.estimated_arrival &&
                  n.estimated_arrival < n.actual_arrival,
              spec, "Late profile needs notice < estimated < actual");
      break;
  }
}

}  // namespace hybridsim
