#include "hybridsim/event_log.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace hybridsim {

std::string_view to_string(EventClass c) {
  switch (c) {
    case EventClass::JobFinish: return "JobFinish";
    case EventClass::CheckpointComplete: return "CheckpointComplete";
    case EventClass::WarningExpiry: return "WarningExpiry";
    case EventClass::OnDemandArrival: return "OnDemandArrival";
    case EventClass::AdvanceNotice: return "AdvanceNotice";
    case EventClass::ReservationTimeout: return "ReservationTimeout";
    case EventClass::JobSubmit: return "JobSubmit";
    case EventClass::SchedulerPass: return "SchedulerPass";
  }
  return "?";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Start: return "start";
    case Action::Backfill: return "backfill";
    case Action::BackfillReserved: return "backfill-reserved";
    case Action::Commit: return "commit";
    case Action::Stall: return "stall";
    case Action::Kill: return "kill";
    case Action::Warn: return "warn";
    case Action::Evict: return "evict";
    case Action::Shrink: return "shrink";
    case Action::Expand: return "expand";
    case Action::Resume: return "resume";
    case Action::Pledge: return "pledge";
    case Action::Reserve: return "reserve";
    case Action::Release: return "release";
  }
  return "?";
}

void EventLog::event(Time t, EventClass c, JobId job, Nodes nodes, JobId ref) {
  records_.push_back({t, std::string(to_string(c)), job, nodes, ref});
}

void EventLog::action(Time t, Action a, JobId job, Nodes nodes, JobId ref) {
  records_.push_back({t, std::string(to_string(a)), job, nodes, ref});
}

void EventLog::write_csv(std::ostream& out) const {
  out << "# hybridsim event log v" << kEventLogVersion << "\r\n";
  out << "time,kind,job,nodes,ref\r\n";
  for (const auto& r : records_) {
    out << r.time << ',' << r.kind << ',' << r.job << ',' << r.nodes << ',' << r.ref << "\r\n";
  }
}

EventLog EventLog::read_csv(std::istream& in) {
  EventLog log;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    LogRecord r;
    if (!(ss >> r.time >> r.kind >> r.job >> r.nodes >> r.ref)) {
      throw std::runtime_error("malformed event log line: " + line);
    }
    log.records_.push_back(std::move(r));
  }
  return log;
}

long first_difference(const EventLog& a, const EventLog& b) {
  const auto& x = a.records();
  const auto& y = b.records();
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] == y[i])) return static_cast<long>(i);
  }
  return x.size() == y.size() ? -1 : static_cast<long>(n);
}

}  // namespace hybridsim
