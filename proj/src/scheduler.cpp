#include "bebplan/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include "bebplan/error.hpp"

namespace bebplan {

TripSequence make_sequence(int sequence_id, std::vector<std::string> ordered_trips, const Network& network) {
  TripSequence seq;
  seq.sequence_id = sequence_id;
  seq.ordered_trips = std::move(ordered_trips);
  if (seq.ordered_trips.empty()) return seq;
  const Trip* prev = nullptr;
  for (const auto& label : seq.ordered_trips) {
    const Trip& trip = network.trip(label);
    if (prev == nullptr) {
      seq.arcs.emplace_back(kDepotAlias, label);
      seq.total_deadhead_km += network.pull_out(trip).distance_km;
    } else {
      seq.arcs.emplace_back(prev->label, label);
      seq.total_deadhead_km += network.between(*prev, trip).distance_km;
    }
    seq.total_service_km += trip.distance_km;
    prev = &trip;
  }
  seq.arcs.emplace_back(prev->label, kDepotAlias);
  seq.total_deadhead_km += network.pull_in(*prev).distance_km;
  return seq;
}

VehicleSchedule build_schedule(const Network& network) {
  std::vector<const Trip*> sorted;
  for (const auto& t : network.trips()) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const Trip* a, const Trip* b) {
    if (a->depart_min != b->depart_min) return a->depart_min < b->depart_min;
    if (a->end_min != b->end_min) return a->end_min < b->end_min;
    return a->label < b->label;
  });

  struct Bus {
    std::vector<std::string> trips;
    const Trip* last = nullptr;
    double distance_so_far = 0.0;
  };
  std::vector<Bus> buses;

  for (const Trip* next : sorted) {
    std::optional<std::size_t> chosen;
    double best_time = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < buses.size(); ++b) {
      const Bus& bus = buses[b];
      const Deadhead leg = network.between(*bus.last, *next);
      if (!(bus.last->end_min + leg.time_min < next->depart_min)) continue;
      if (!chosen) {
        chosen = b;
        best_time = leg.time_min;
        continue;
      }
      const Bus& cur = buses[*chosen];
      // shortest dead-heading time, latest end, least distance, lowest index
      if (leg.time_min != best_time) {
        if (leg.time_min < best_time) {
          chosen = b;
          best_time = leg.time_min;
        }
        continue;
      }
      if (bus.last->end_min != cur.last->end_min) {
        if (bus.last->end_min > cur.last->end_min) chosen = b;
        continue;
      }
      if (bus.distance_so_far < cur.distance_so_far) chosen = b;
    }

    if (chosen) {
      Bus& bus = buses[*chosen];
      bus.distance_so_far += network.between(*bus.last, *next).distance_km + next->distance_km;
      bus.trips.push_back(next->label);
      bus.last = next;
    } else {
      Bus bus;
      bus.trips.push_back(next->label);
      bus.last = next;
      bus.distance_so_far = network.pull_out(*next).distance_km + next->distance_km;
      buses.push_back(std::move(bus));
    }
  }

  VehicleSchedule schedule;
  for (std::size_t b = 0; b < buses.size(); ++b) {
    schedule.sequences.push_back(make_sequence(static_cast<int>(b), std::move(buses[b].trips), network));
  }
  return schedule;
}

std::string to_string(ScheduleViolationKind kind) {
  switch (kind) {
    case ScheduleViolationKind::UncoveredTrip: return "UncoveredTrip";
    case ScheduleViolationKind::DuplicatedTrip: return "DuplicatedTrip";
    case ScheduleViolationKind::UnknownTrip: return "UnknownTrip";
    case ScheduleViolationKind::InfeasibleConnection: return "InfeasibleConnection";
    case ScheduleViolationKind::InconsistentArcs: return "InconsistentArcs";
    case ScheduleViolationKind::InconsistentTotals: return "InconsistentTotals";
    case ScheduleViolationKind::EmptySequence: return "EmptySequence";
  }
  return "Unknown";
}

std::vector<ScheduleViolation> validate_schedule(const VehicleSchedule& schedule, const Network& network) {
  std::vector<ScheduleViolation> out;
  std::map<std::string, int> seen;
  for (const auto& seq : schedule.sequences) {
    const std::string where = "sequence " + std::to_string(seq.sequence_id);
    if (seq.ordered_trips.empty()) {
      out.push_back({ScheduleViolationKind::EmptySequence, where});
      continue;
    }
    bool all_known = true;
    for (const auto& label : seq.ordered_trips) {
      if (!network.has_trip(label)) {
        out.push_back({ScheduleViolationKind::UnknownTrip, where + ": " + label});
        all_known = false;
        continue;
      }
      if (++seen[label] == 2) out.push_back({ScheduleViolationKind::DuplicatedTrip, label});
    }
    if (!all_known) continue;
    for (std::size_t p = 1; p < seq.ordered_trips.size(); ++p) {
      const Trip& i = network.trip(seq.ordered_trips[p - 1]);
      const Trip& j = network.trip(seq.ordered_trips[p]);
      if (!(i.end_min + network.between(i, j).time_min < j.depart_min)) {
        out.push_back({ScheduleViolationKind::InfeasibleConnection, where + ": " + i.label + " -> " + j.label});
      }
    }
    const TripSequence expected = make_sequence(seq.sequence_id, seq.ordered_trips, network);
    if (expected.arcs != seq.arcs) out.push_back({ScheduleViolationKind::InconsistentArcs, where});
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!close(seq.total_service_km, expected.total_service_km) ||
        !close(seq.total_deadhead_km, expected.total_deadhead_km)) {
      out.push_back({ScheduleViolationKind::InconsistentTotals, where});
    }
  }
  for (const auto& t : network.trips()) {
    if (!seen.count(t.label)) out.push_back({ScheduleViolationKind::UncoveredTrip, t.label});
  }
  return out;
}

nlohmann::json schedule_to_json(const VehicleSchedule& schedule) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& seq : schedule.sequences) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& [i, j] : seq.arcs) arcs.push_back({i, j});
    arr.push_back({{"sequence_id", seq.sequence_id},
                   {"trips", seq.ordered_trips},
                   {"arcs", arcs},
                   {"service_km", seq.total_service_km},
                   {"deadhead_km", seq.total_deadhead_km}});
  }
  return arr;
}

VehicleSchedule schedule_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "schedule.json must hold an array");
  VehicleSchedule schedule;
  try {
    for (const auto& e : j) {
      TripSequence seq;
      seq.sequence_id = e.at("sequence_id").get<int>();
      seq.ordered_trips = e.at("trips").get<std::vector<std::string>>();
      for (const auto& arc : e.at("arcs")) seq.arcs.emplace_back(arc.at(0).get<std::string>(), arc.at(1).get<std::string>());
      seq.total_service_km = e.at("service_km").get<double>();
      seq.total_deadhead_km = e.at("deadhead_km").get<double>();
      schedule.sequences.push_back(std::move(seq));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidInput, std::string("schedule.json: ") + ex.what());
  }
  return schedule;
}

void write_schedule(const std::filesystem::path& path, const VehicleSchedule& schedule) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << schedule_to_json(schedule).dump(2) << '\n';
}

VehicleSchedule read_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidInput, path.filename().string() + ": " + ex.what());
  }
  return schedule_from_json(j);
}

}  // namespace bebplan
