#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bebplan/config.hpp"

namespace bebplan {

// Reserved station id in deadheads.csv that always refers to the depot.
inline constexpr const char* kDepotAlias = "DEPOT";

struct Station {
  std::string id;
  bool is_candidate_ocf = false;
  bool is_depot = false;

  bool operator==(const Station&) const = default;
};

struct Trip {
  std::string label;
  std::string start_station;
  std::string end_station;
  int depart_min = 0;
  int end_min = 0;
  double distance_km = 0.0;

  bool operator==(const Trip&) const = default;
};

struct Deadhead {
  double distance_km = 0.0;
  double time_min = 0.0;

  bool operator==(const Deadhead&) const = default;
};

// Dead-heading legs keyed by (from station, to station). Trip-level values
// d_ij / t_ij resolve through the end station of i and the start station of j;
// identical stations always give a zero leg.
class DeadheadMatrix {
 public:
  void set(const std::string& from, const std::string& to, Deadhead leg);
  std::optional<Deadhead> find(const std::string& from, const std::string& to) const;
  // Throws IncompleteDeadheadMatrix when the pair is missing.
  Deadhead at(const std::string& from, const std::string& to) const;
  const std::map<std::pair<std::string, std::string>, Deadhead>& entries() const { return legs_; }

  bool operator==(const DeadheadMatrix&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, Deadhead> legs_;
};

class Network {
 public:
  Network() = default;
  // Validates every invariant; throws Error naming the offending record.
  Network(std::vector<Station> stations, std::vector<Trip> trips, DeadheadMatrix deadheads);

  const std::vector<Station>& stations() const { return stations_; }
  const std::vector<Trip>& trips() const { return trips_; }
  const DeadheadMatrix& deadheads() const { return deadheads_; }

  const Station& depot() const { return stations_[depot_]; }
  // Candidate opportunity-charging locations (set R), in stations.csv order.
  const std::vector<std::string>& candidate_stations() const { return candidates_; }
  std::optional<std::size_t> candidate_index(const std::string& station) const;

  std::size_t trip_index(const std::string& label) const;  // throws InvalidInput
  bool has_trip(const std::string& label) const { return trip_by_label_.count(label) != 0; }
  const Trip& trip(const std::string& label) const { return trips_[trip_index(label)]; }

  // d_ij and t_ij between the end of trip `from` and the start of trip `to`.
  Deadhead between(const Trip& from, const Trip& to) const;
  Deadhead pull_out(const Trip& first) const;  // depot -> start of first trip
  Deadhead pull_in(const Trip& last) const;    // end of last trip -> depot

  bool operator==(const Network& other) const {
    return stations_ == other.stations_ && trips_ == other.trips_ && deadheads_ == other.deadheads_;
  }

 private:
  Deadhead leg(const std::string& from, const std::string& to) const;

  std::vector<Station> stations_;
  std::vector<Trip> trips_;
  DeadheadMatrix deadheads_;
  std::size_t depot_ = 0;
  std::vector<std::string> candidates_;
  std::unordered_map<std::string, std::size_t> trip_by_label_;
  std::unordered_map<std::string, std::size_t> candidate_by_id_;
};

struct DatasetPaths {
  std::filesystem::path stations;
  std::filesystem::path trips;
  std::filesystem::path deadheads;
  std::filesystem::path fleet;
  std::filesystem::path scenario;

  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

struct Dataset {
  Network network;
  ScenarioConfig config;
  std::vector<std::string> warnings;
};

Dataset load_network(const DatasetPaths& paths);
inline Dataset load_network(const std::filesystem::path& dir) {
  return load_network(DatasetPaths::in_directory(dir));
}

// Writes the five input files into `dir` so that load_network reads back an
// identical Network and ScenarioConfig.
void write_dataset(const std::filesystem::path& dir, const Network& network, const ScenarioConfig& config);

}  // namespace bebplan
