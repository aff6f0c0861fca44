#include "bebplan/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>

#include "bebplan/error.hpp"

namespace bebplan {

double SequenceProfile::service_km() const {
  double sum = 0.0;
  for (const auto& s : stops) sum += s.service_km;
  return sum;
}

double SequenceProfile::deadhead_km() const {
  double sum = pull_out_km;
  for (const auto& s : stops) sum += s.deadhead_after_km;
  return sum;
}

SequenceProfile make_profile(const TripSequence& sequence, const Network& network) {
  SequenceProfile profile;
  const auto& labels = sequence.ordered_trips;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const Trip& trip = network.trip(labels[p]);
    SequenceProfile::Stop stop;
    stop.label = trip.label;
    stop.start_station = trip.start_station;
    stop.service_km = trip.distance_km;
    if (p == 0) {
      profile.pull_out_km = network.pull_out(trip).distance_km;
    } else {
      const Trip& prev = network.trip(labels[p - 1]);
      const Deadhead leg = network.between(prev, trip);
      stop.dwell_h = std::max(0.0, (trip.depart_min - prev.end_min - leg.time_min) / 60.0);
    }
    if (p + 1 < labels.size()) {
      stop.deadhead_after_km = network.between(trip, network.trip(labels[p + 1])).distance_km;
    } else {
      stop.deadhead_after_km = network.pull_in(trip).distance_km;
    }
    profile.stops.push_back(std::move(stop));
  }
  return profile;
}

SocTrace simulate_sequence(const SequenceProfile& profile, const BusType& bus_type,
                           const std::set<std::string>& equipped_stations, double charging_power_kw,
                           const ScenarioConfig& config) {
  if (!bus_type.is_beb()) throw Error(ErrorCode::NotABev, bus_type.id);
  SocTrace trace;
  const double cap = config.usable_soc_fraction * bus_type.battery_capacity_kwh;
  trace.usable_capacity = cap;
  bool ok = true;
  double soc = cap - profile.pull_out_km * bus_type.consumption_empty;
  for (std::size_t p = 0; p < profile.stops.size(); ++p) {
    const auto& stop = profile.stops[p];
    if (soc < -kSocTolerance) ok = false;
    double charge = 0.0;
    if (p > 0 && equipped_stations.count(stop.start_station)) {
      charge = std::clamp(cap - soc, 0.0, charging_power_kw * stop.dwell_h);
    }
    SocRecord rec;
    rec.trip = stop.label;
    rec.soc_before = soc;
    rec.charged = charge;
    soc += charge - stop.service_km * bus_type.consumption_loaded;
    rec.soc_after_trip = soc;
    trace.records.push_back(rec);
    soc -= stop.deadhead_after_km * bus_type.consumption_empty;
  }
  if (soc < -kSocTolerance) ok = false;
  trace.soc_at_depot = soc;
  trace.feasible = ok;
  return trace;
}

SocTrace simulate_sequence(const TripSequence& sequence, const Network& network, const BusType& bus_type,
                           const std::set<std::string>& equipped_stations, double charging_power_kw,
                           const ScenarioConfig& config) {
  return simulate_sequence(make_profile(sequence, network), bus_type, equipped_stations, charging_power_kw, config);
}

bool ncb_feasible(const SequenceProfile& profile, const BusType& bus_type, const ScenarioConfig& config) {
  if (bus_type.kind != BusKind::Ncb) throw Error(ErrorCode::NotAnNcb, bus_type.id);
  const double need = profile.consumption(bus_type.consumption_loaded, bus_type.consumption_empty);
  return need <= config.usable_soc_fraction * bus_type.battery_capacity_kwh + kSocTolerance;
}

bool ncb_feasible(const TripSequence& sequence, const Network& network, const BusType& bus_type,
                  const ScenarioConfig& config) {
  return ncb_feasible(make_profile(sequence, network), bus_type, config);
}

namespace {

BusType probe_type(const ScenarioConfig& config, double capacity) {
  BusType t;
  t.id = "probe";
  t.kind = BusKind::Ocb;
  t.battery_capacity_kwh = capacity;
  t.consumption_loaded = config.beb.consumption_kwh_per_km;
  t.consumption_empty = config.beb_empty_consumption();
  return t;
}

}  // namespace

double min_battery_capacity(const SequenceProfile& profile, const std::set<std::string>& equipped_stations,
                            double charging_power_kw, const ScenarioConfig& config) {
  const double total =
      profile.consumption(config.beb.consumption_kwh_per_km, config.beb_empty_consumption());
  double hi = total / config.usable_soc_fraction;
  if (hi <= 0.0) return 0.0;
  double lo = 0.0;
  auto feasible = [&](double q) {
    return simulate_sequence(profile, probe_type(config, q), equipped_stations, charging_power_kw, config).feasible;
  };
  while (hi - lo > kCapacitySearchTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

double min_battery_capacity(const TripSequence& sequence, const Network& network, double charging_power_kw,
                            const ScenarioConfig& config) {
  const auto& r = network.candidate_stations();
  return min_battery_capacity(make_profile(sequence, network), std::set<std::string>(r.begin(), r.end()),
                              charging_power_kw, config);
}

namespace {

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<FeasibilityRow> feasibility_study(const VehicleSchedule& schedule, const Network& network,
                                              const ScenarioConfig& config, const std::vector<double>& power_grid,
                                              double q_max) {
  std::vector<SequenceProfile> profiles;
  for (const auto& seq : schedule.sequences) profiles.push_back(make_profile(seq, network));
  const auto& r = network.candidate_stations();
  const std::set<std::string> equipped(r.begin(), r.end());

  auto evaluate = [&](double power) {
    std::vector<double> caps;
    caps.reserve(profiles.size());
    for (const auto& p : profiles) caps.push_back(min_battery_capacity(p, equipped, power, config));
    std::sort(caps.begin(), caps.end());
    FeasibilityRow row;
    row.power_kw = power;
    if (!caps.empty()) {
      row.min = caps.front();
      row.q1 = quantile(caps, 0.25);
      row.median = quantile(caps, 0.5);
      row.q3 = quantile(caps, 0.75);
      row.max = caps.back();
      const auto ok = std::count_if(caps.begin(), caps.end(), [&](double c) { return c <= q_max; });
      row.share_pct = 100.0 * static_cast<double>(ok) / static_cast<double>(caps.size());
    }
    return row;
  };

  // Power levels are independent; results are collected in grid order.
  std::vector<std::future<FeasibilityRow>> jobs;
  for (double power : power_grid) jobs.push_back(std::async(std::launch::async, evaluate, power));
  std::vector<FeasibilityRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void write_feasibility_csv(const std::filesystem::path& path, const std::vector<FeasibilityRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "power_kw,min,q1,median,q3,max,share_pct\n" << std::fixed << std::setprecision(2);
  for (const auto& r : rows) {
    out << r.power_kw << ',' << r.min << ',' << r.q1 << ',' << r.median << ',' << r.q3 << ',' << r.max << ','
        << r.share_pct << '\n';
  }
}

}  // namespace bebplan
