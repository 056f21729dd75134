#include "hybridsim/config.hpp"

#include <stdexcept>
#include <string>

namespace hybridsim {

void SystemConfig::validate() const {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (mtbf <= 0) throw std::invalid_argument("mtbf must be > 0");
  if (checkpoint_cost_small < 1 || checkpoint_cost_large < 1) {
    throw std::invalid_argument("checkpoint costs must be >= 1 s");
  }
  if (!(checkpoint_scale > 0.0)) {
    throw std::invalid_argument("checkpoint_scale must be > 0");
  }
  if (reservation_grace < 0) throw std::invalid_argument("reservation_grace must be >= 0");
}

std::string MechanismConfig::name() const {
  if (!enabled) return std::string(kBaselineName);
  std::string out;
  switch (notice) {
    case NoticeStrategy::None: out = "N"; break;
    case NoticeStrategy::CollectUntilArrival: out = "CUA"; break;
    case NoticeStrategy::CollectUntilPredicted: out = "CUP"; break;
  }
  out += arrival == ArrivalStrategy::Preempt ? "&PAA" : "&SPAA";
  return out;
}

MechanismConfig parse_mechanism(std::string_view name) {
  MechanismConfig m;
  if (name == kBaselineName) {
    m.enabled = false;
    return m;
  }
  const auto amp = name.find('&');
  if (amp != std::string_view::npos) {
    const auto head = name.substr(0, amp);
    const auto tail = name.substr(amp + 1);
    bool ok = true;
    if (head == "N") m.notice = NoticeStrategy::None;
    else if (head == "CUA") m.notice = NoticeStrategy::CollectUntilArrival;
    else if (head == "CUP") m.notice = NoticeStrategy::CollectUntilPredicted;
    else ok = false;
    if (tail == "PAA") m.arrival = ArrivalStrategy::Preempt;
    else if (tail == "SPAA") m.arrival = ArrivalStrategy::ShrinkThenPreempt;
    else ok = false;
    if (ok) return m;
  }
  std::string msg = "unknown mechanism '" + std::string(name) + "'; valid names:";
  for (auto n : kMechanismNames) msg += " " + std::string(n);
  msg += " (or " + std::string(kBaselineName) + ")";
  throw std::invalid_argument(msg);
}

void to_json(nlohmann::json& j, const SystemConfig& c) {
  j = nlohmann::json{{"capacity", c.capacity},
                     {"mtbf", c.mtbf},
                     {"checkpoint_cost_small", c.checkpoint_cost_small},
                     {"checkpoint_cost_large", c.checkpoint_cost_large},
                     {"checkpoint_node_threshold", c.checkpoint_node_threshold},
                     {"checkpoint_scale", c.checkpoint_scale},
                     {"reservation_grace", c.reservation_grace},
                     {"setup_counts_as_waste", c.setup_counts_as_waste},
                     {"checkpoint_counts_as_waste", c.checkpoint_counts_as_waste}};
}

void from_json(const nlohmann::json& j, SystemConfig& c) {
  c.capacity = j.value("capacity", c.capacity);
  c.mtbf = j.value("mtbf", c.mtbf);
  c.checkpoint_cost_small = j.value("checkpoint_cost_small", c.checkpoint_cost_small);
  c.checkpoint_cost_large = j.value("checkpoint_cost_large", c.checkpoint_cost_large);
  c.checkpoint_node_threshold =
      j.value("checkpoint_node_threshold", c.checkpoint_node_threshold);
  c.checkpoint_scale = j.value("checkpoint_scale", c.checkpoint_scale);
  c.reservation_grace = j.value("reservation_grace", c.reservation_grace);
  c.setup_counts_as_waste = j.value("setup_counts_as_waste", c.setup_counts_as_waste);
  c.checkpoint_counts_as_waste =
      j.value("checkpoint_counts_as_waste", c.checkpoint_counts_as_waste);
}

}  // namespace hybridsim
