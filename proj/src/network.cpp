#include "bebplan/network.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "bebplan/error.hpp"
#include "csv.hpp"

namespace bebplan {

void DeadheadMatrix::set(const std::string& from, const std::string& to, Deadhead leg) {
  legs_[{from, to}] = leg;
}

std::optional<Deadhead> DeadheadMatrix::find(const std::string& from, const std::string& to) const {
  auto it = legs_.find({from, to});
  if (it == legs_.end()) return std::nullopt;
  return it->second;
}

Deadhead DeadheadMatrix::at(const std::string& from, const std::string& to) const {
  if (auto leg = find(from, to)) return *leg;
  throw Error(ErrorCode::IncompleteDeadheadMatrix, "no dead-heading leg " + from + " -> " + to);
}

Network::Network(std::vector<Station> stations, std::vector<Trip> trips, DeadheadMatrix deadheads)
    : stations_(std::move(stations)), trips_(std::move(trips)), deadheads_(std::move(deadheads)) {
  std::unordered_map<std::string, std::size_t> station_by_id;
  std::optional<std::size_t> depot;
  for (std::size_t i = 0; i < stations_.size(); ++i) {
    const auto& s = stations_[i];
    if (s.id.empty()) throw Error(ErrorCode::InvalidInput, "station with empty id");
    if (!station_by_id.emplace(s.id, i).second) {
      throw Error(ErrorCode::InvalidInput, "duplicate station id " + s.id);
    }
    if (s.is_depot) {
      if (depot) throw Error(ErrorCode::InvalidInput, "second depot station " + s.id);
      depot = i;
    }
  }
  if (!depot) throw Error(ErrorCode::MissingDepot, "no station has is_depot = true");
  depot_ = *depot;

  std::set<std::string> start_stations;
  for (std::size_t i = 0; i < trips_.size(); ++i) {
    const Trip& t = trips_[i];
    if (!trip_by_label_.emplace(t.label, i).second) throw Error(ErrorCode::DuplicateTripLabel, t.label);
    if (!station_by_id.count(t.start_station) || !station_by_id.count(t.end_station)) {
      throw Error(ErrorCode::InvalidInput, "trip " + t.label + " references an unknown station");
    }
    if (t.distance_km < 0.0) throw Error(ErrorCode::NegativeValue, "distance_km of trip " + t.label);
    if (t.depart_min < 0) throw Error(ErrorCode::NegativeValue, "depart_min of trip " + t.label);
    if (!(t.depart_min < t.end_min)) {
      throw Error(ErrorCode::InvalidInput, "trip " + t.label + " does not end after it departs");
    }
    start_stations.insert(t.start_station);
  }

  for (const auto& s : stations_) {
    if (!s.is_candidate_ocf) continue;
    if (!start_stations.count(s.id)) {
      throw Error(ErrorCode::InvalidInput, "candidate station " + s.id + " starts no trip");
    }
    candidate_by_id_[s.id] = candidates_.size();
    candidates_.push_back(s.id);
  }

  for (const auto& [key, leg] : deadheads_.entries()) {
    const auto& [from, to] = key;
    if (!station_by_id.count(from) || !station_by_id.count(to)) {
      throw Error(ErrorCode::InvalidInput, "dead-heading leg " + from + " -> " + to + " names an unknown station");
    }
    if (leg.distance_km < 0.0 || leg.time_min < 0.0) {
      throw Error(ErrorCode::NegativeValue, "dead-heading leg " + from + " -> " + to);
    }
    if (from == to && (leg.distance_km != 0.0 || leg.time_min != 0.0)) {
      throw Error(ErrorCode::InvalidInput, "dead-heading leg " + from + " -> " + to + " must be zero");
    }
  }

  // Every leg the schedule may need: depot legs for all trips, and every
  // end-to-start pair that is reachable in time.
  const std::string& depot_id = stations_[depot_].id;
  for (const Trip& t : trips_) {
    if (t.start_station != depot_id && !deadheads_.find(depot_id, t.start_station)) {
      throw Error(ErrorCode::IncompleteDeadheadMatrix,
                  "missing " + depot_id + " -> " + t.start_station + " (pull-out of trip " + t.label + ")");
    }
    if (t.end_station != depot_id && !deadheads_.find(t.end_station, depot_id)) {
      throw Error(ErrorCode::IncompleteDeadheadMatrix,
                  "missing " + t.end_station + " -> " + depot_id + " (pull-in of trip " + t.label + ")");
    }
  }
  for (const Trip& i : trips_) {
    for (const Trip& j : trips_) {
      if (i.end_min >= j.depart_min || i.end_station == j.start_station) continue;
      if (!deadheads_.find(i.end_station, j.start_station)) {
        throw Error(ErrorCode::IncompleteDeadheadMatrix, "missing " + i.end_station + " -> " + j.start_station +
                                                             " (trip " + i.label + " -> " + j.label + ")");
      }
    }
  }
}

std::optional<std::size_t> Network::candidate_index(const std::string& station) const {
  auto it = candidate_by_id_.find(station);
  if (it == candidate_by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::trip_index(const std::string& label) const {
  auto it = trip_by_label_.find(label);
  if (it == trip_by_label_.end()) throw Error(ErrorCode::InvalidInput, "unknown trip " + label);
  return it->second;
}

Deadhead Network::leg(const std::string& from, const std::string& to) const {
  if (from == to) return {};
  return deadheads_.at(from, to);
}

Deadhead Network::between(const Trip& from, const Trip& to) const { return leg(from.end_station, to.start_station); }
Deadhead Network::pull_out(const Trip& first) const { return leg(depot().id, first.start_station); }
Deadhead Network::pull_in(const Trip& last) const { return leg(last.end_station, depot().id); }

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "stations.csv", dir / "trips.csv", dir / "deadheads.csv", dir / "fleet.csv", dir / "scenario.json"};
}

Dataset load_network(const DatasetPaths& paths) {
  Dataset out;
  auto& warnings = out.warnings;

  auto st = csv::read(paths.stations);
  st.require({"id", "is_candidate_ocf", "is_depot"}, warnings);
  std::vector<Station> stations;
  for (std::size_t r = 0; r < st.rows.size(); ++r) {
    stations.push_back({st.cell(r, "id"), st.boolean(r, "is_candidate_ocf"), st.boolean(r, "is_depot")});
  }
  std::string depot_id;
  for (const auto& s : stations) {
    if (s.is_depot) depot_id = s.id;
  }

  auto tr = csv::read(paths.trips);
  tr.require({"label", "start_station", "end_station", "depart_min", "end_min", "distance_km"}, warnings);
  std::vector<Trip> trips;
  for (std::size_t r = 0; r < tr.rows.size(); ++r) {
    trips.push_back({tr.cell(r, "label"), tr.cell(r, "start_station"), tr.cell(r, "end_station"),
                     tr.integer(r, "depart_min"), tr.integer(r, "end_min"), tr.number(r, "distance_km")});
  }

  auto dh = csv::read(paths.deadheads);
  dh.require({"from", "to", "distance_km", "time_min"}, warnings);
  DeadheadMatrix matrix;
  for (std::size_t r = 0; r < dh.rows.size(); ++r) {
    auto resolve = [&](const std::string& id) { return id == kDepotAlias && !depot_id.empty() ? depot_id : id; };
    std::string from = resolve(dh.cell(r, "from"));
    std::string to = resolve(dh.cell(r, "to"));
    if (matrix.find(from, to)) {
      throw Error(ErrorCode::InvalidInput, dh.where(r) + ": duplicate leg " + from + " -> " + to);
    }
    matrix.set(from, to, {dh.number(r, "distance_km"), dh.number(r, "time_min")});
  }

  auto fl = csv::read(paths.fleet);
  fl.require({"emission_class", "age_years", "count"}, warnings);
  std::vector<InitialFleetEntry> fleet;
  for (std::size_t r = 0; r < fl.rows.size(); ++r) {
    InitialFleetEntry e{fl.cell(r, "emission_class"), fl.integer(r, "age_years"), fl.integer(r, "count")};
    if (e.count < 0) throw Error(ErrorCode::NegativeValue, fl.where(r) + ": count");
    if (e.age_years < 0) throw Error(ErrorCode::NegativeValue, fl.where(r) + ": age_years");
    fleet.push_back(e);
  }

  std::ifstream in(paths.scenario);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + paths.scenario.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, paths.scenario.filename().string() + ": " + e.what());
  }
  out.config = config_from_json(j, &warnings);
  out.config.initial_fleet = std::move(fleet);
  out.config.validate();
  out.network = Network(std::move(stations), std::move(trips), std::move(matrix));
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const Network& network, const ScenarioConfig& config) {
  std::filesystem::create_directories(dir);
  auto paths = DatasetPaths::in_directory(dir);
  {
    auto out = open_out(paths.stations);
    out << "id,is_candidate_ocf,is_depot\n";
    for (const auto& s : network.stations()) {
      out << s.id << ',' << (s.is_candidate_ocf ? "true" : "false") << ',' << (s.is_depot ? "true" : "false") << '\n';
    }
  }
  {
    auto out = open_out(paths.trips);
    out << "label,start_station,end_station,depart_min,end_min,distance_km\n";
    for (const auto& t : network.trips()) {
      out << t.label << ',' << t.start_station << ',' << t.end_station << ',' << t.depart_min << ',' << t.end_min
          << ',' << t.distance_km << '\n';
    }
  }
  {
    auto out = open_out(paths.deadheads);
    out << "from,to,distance_km,time_min\n";
    for (const auto& [key, leg] : network.deadheads().entries()) {
      out << key.first << ',' << key.second << ',' << leg.distance_km << ',' << leg.time_min << '\n';
    }
  }
  {
    auto out = open_out(paths.fleet);
    out << "emission_class,age_years,count\n";
    for (const auto& e : config.initial_fleet) out << e.emission_class << ',' << e.age_years << ',' << e.count << '\n';
  }
  {
    auto out = open_out(paths.scenario);
    nlohmann::json j = config;
    out << j.dump(2) << '\n';
  }
}

}  // namespace bebplan
