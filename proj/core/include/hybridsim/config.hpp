#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hybridsim/types.hpp"

namespace hybridsim {

/// Machine-level constants. Defaults reproduce the reference configuration
/// (4,392-node system, Daly checkpointing with 600/1200 s writes, 10 minute
/// reservation grace).
struct SystemConfig {
  Nodes capacity = 4392;
  Time mtbf = 86400;
  Time checkpoint_cost_small = 600;
  Time checkpoint_cost_large = 1200;
  Nodes checkpoint_node_threshold = 1024;
  double checkpoint_scale = 1.0;
  Time reservation_grace = 600;
  // Metric toggles: whether setup and checkpoint writes are excluded from
  // useful work when computing utilization.
  bool setup_counts_as_waste = true;
  bool checkpoint_counts_as_waste = true;

  void validate() const;
};

enum class NoticeStrategy { None, CollectUntilArrival, CollectUntilPredicted };
enum class ArrivalStrategy { Preempt, ShrinkThenPreempt };

struct MechanismConfig {
  /// false selects plain FCFS/EASY: on-demand jobs queue like any other job.
  bool enabled = true;
  NoticeStrategy notice = NoticeStrategy::None;
  ArrivalStrategy arrival = ArrivalStrategy::Preempt;
  Time warning_duration = 120;
  bool cup_checkpoint_aligned = true;

  std::string name() const;
};

inline constexpr std::array<std::string_view, 6> kMechanismNames = {
    "N&PAA", "N&SPAA", "CUA&PAA", "CUA&SPAA", "CUP&PAA", "CUP&SPAA"};
inline constexpr std::string_view kBaselineName = "FCFS-EASY";

/// Accepts the six mechanism names and FCFS-EASY. Throws
/// std::invalid_argument listing the valid names otherwise.
MechanismConfig parse_mechanism(std::string_view name);

struct WorkloadConfig;

/// Everything one simulation run needs besides the workload itself.
struct RunConfig {
  SystemConfig system;
  MechanismConfig mechanism;
  std::string mechanism_name = "N&PAA";
  std::string workload_path;
  std::uint64_t seed = 1;
  std::string out_prefix = "report";
  std::optional<std::string> event_log_path;
  std::optional<std::string> ledger_audit_path;
};

void to_json(nlohmann::json& j, const SystemConfig& c);
void from_json(const nlohmann::json& j, SystemConfig& c);

}  // namespace hybridsim
