#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bebplan/network.hpp"

namespace bebplan {

// One bus's daily workload. Arcs include the synthetic depot legs; the depot
// node is written as kDepotAlias.
struct TripSequence {
  int sequence_id = 0;
  std::vector<std::string> ordered_trips;
  std::vector<std::pair<std::string, std::string>> arcs;
  double total_service_km = 0.0;
  double total_deadhead_km = 0.0;

  bool operator==(const TripSequence&) const = default;
};

struct VehicleSchedule {
  std::vector<TripSequence> sequences;

  std::size_t fleet_size() const { return sequences.size(); }
  bool operator==(const VehicleSchedule&) const = default;
};

// Builds a sequence (arcs and km totals) from an ordered list of trip labels.
TripSequence make_sequence(int sequence_id, std::vector<std::string> ordered_trips, const Network& network);

// Concurrent scheduling: trips in departure order go to the time-feasible bus
// with the shortest dead-heading time, then the latest end of its last trip,
// then the least distance covered so far, then the lowest bus index.
VehicleSchedule build_schedule(const Network& network);

enum class ScheduleViolationKind {
  UncoveredTrip,
  DuplicatedTrip,
  UnknownTrip,
  InfeasibleConnection,
  InconsistentArcs,
  InconsistentTotals,
  EmptySequence,
};

struct ScheduleViolation {
  ScheduleViolationKind kind;
  std::string detail;
};

std::string to_string(ScheduleViolationKind kind);

std::vector<ScheduleViolation> validate_schedule(const VehicleSchedule& schedule, const Network& network);

nlohmann::json schedule_to_json(const VehicleSchedule& schedule);
VehicleSchedule schedule_from_json(const nlohmann::json& j);
void write_schedule(const std::filesystem::path& path, const VehicleSchedule& schedule);
VehicleSchedule read_schedule(const std::filesystem::path& path);

}  // namespace bebplan
