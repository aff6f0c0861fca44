#include "instances.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace instances {

using namespace bebplan;

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Network random_network(std::mt19937_64& rng, int stations, int candidates, int trips) {
  std::vector<std::string> ids = {kDepotAlias};
  for (int i = 1; i <= stations; ++i) ids.push_back("S" + std::to_string(i));

  DeadheadMatrix dh;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const int km = uniform(rng, 2, 10);
      const Deadhead leg{static_cast<double>(km), static_cast<double>(2 * km + uniform(rng, 0, 6))};
      dh.set(ids[a], ids[b], leg);
      dh.set(ids[b], ids[a], leg);
    }
  }

  std::vector<Trip> list;
  std::set<std::string> starts;
  for (int i = 0; i < trips; ++i) {
    Trip t;
    t.label = "T" + std::to_string(i + 1);
    t.start_station = ids[static_cast<std::size_t>(uniform(rng, 1, stations))];
    t.end_station = ids[static_cast<std::size_t>(uniform(rng, 1, stations))];
    t.depart_min = uniform(rng, 300, 900);
    t.end_min = t.depart_min + uniform(rng, 20, 70);
    t.distance_km = uniform(rng, 8, 45);
    starts.insert(t.start_station);
    list.push_back(t);
  }

  std::vector<std::string> pool(starts.begin(), starts.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(candidates)));
  const std::set<std::string> chosen(pool.begin(), pool.end());

  std::vector<Station> st;
  for (const auto& id : ids) st.push_back({id, chosen.count(id) != 0, id == kDepotAlias});
  return Network(std::move(st), std::move(list), std::move(dh));
}

OracleInstance oracle_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleInstance inst;
  inst.seed = seed;
  for (;;) {
    const int stations = uniform(rng, 2, 4);
    inst.network = random_network(rng, stations, uniform(rng, 1, std::min(3, stations)), uniform(rng, 3, 8));
    inst.schedule = build_schedule(inst.network);
    if (inst.schedule.fleet_size() <= 4) break;
  }

  ScenarioConfig& c = inst.config;
  c.horizon_years = uniform(rng, 1, 3);
  c.scenario = Scenario::All;
  const double powers[] = {50, 150, 250, 350, 450};
  c.charging_power_kw = powers[uniform(rng, 0, 4)];
  c.battery_price_reduction_per_year = 0.025 * uniform(rng, 0, 5);
  c.bus_lifetime_years = uniform(rng, 2, 12);
  c.battery_lifetime_years = uniform(rng, 1, 6);
  std::vector<int> holding;
  for (int h = 1; h <= std::min(4, c.bus_lifetime_years); ++h) holding.push_back(h);
  std::shuffle(holding.begin(), holding.end(), rng);
  holding.resize(static_cast<std::size_t>(uniform(rng, 1, 2)));
  std::sort(holding.begin(), holding.end());
  c.iceb.holding_periods = holding;
  // Over three periods the reference prices never favour a BEB; cheaper buses
  // and dearer fuel make the enumeration exercise every decision family.
  c.iceb.fuel_price_per_l = 0.97 * uniform(rng, 1, 6);
  c.beb.purchase_cost = 50000.0 * uniform(rng, 1, 7);
  std::vector<double> caps = {100, 200, 300, 400};
  std::shuffle(caps.begin(), caps.end(), rng);
  caps.resize(static_cast<std::size_t>(uniform(rng, 1, 2)));
  std::sort(caps.begin(), caps.end());
  c.beb.capacities_kwh = caps;

  const char* classes[] = {"EU-III", "EU-V/EEV", "EU-VI"};
  const int entries = uniform(rng, 0, 2);
  for (int e = 0; e < entries; ++e) {
    c.initial_fleet.push_back({classes[uniform(rng, 0, 2)], uniform(rng, 1, holding.back()), uniform(rng, 1, 2)});
  }
  c.validate();
  return inst;
}

ChargingCase random_charging_case(std::mt19937_64& rng) {
  ChargingCase cc;
  // Integer kilometres at 2.0 / 1.5 kWh per km, usable capacities in
  // multiples of 20 kWh and charge limits in multiples of 0.5 kWh keep every
  // reachable SOC on the search grid.
  cc.config.beb.consumption_kwh_per_km = 2.0;
  cc.config.beb.consumption_empty_kwh_per_km = 1.5;
  cc.config.usable_soc_fraction = 0.8;
  const double caps[] = {25, 50, 75, 100};
  cc.bus.id = "OCB_test";
  cc.bus.kind = BusKind::Ocb;
  cc.bus.battery_capacity_kwh = caps[uniform(rng, 0, 3)];
  cc.bus.consumption_loaded = 2.0;
  cc.bus.consumption_empty = 1.5;
  cc.power_kw = 30.0 * uniform(rng, 1, 4);

  const char* stations[] = {"A", "B"};
  for (const char* s : stations) {
    if (uniform(rng, 0, 1)) cc.equipped.insert(s);
  }
  cc.profile.pull_out_km = uniform(rng, 0, 4);
  const int trips = uniform(rng, 1, 3);
  for (int i = 0; i < trips; ++i) {
    SequenceProfile::Stop stop;
    stop.label = "T" + std::to_string(i + 1);
    stop.start_station = stations[uniform(rng, 0, 1)];
    stop.service_km = uniform(rng, 2, 20);
    stop.dwell_h = i == 0 ? 0.0 : uniform(rng, 0, 20) / 60.0;
    stop.deadhead_after_km = uniform(rng, 0, 4);
    cc.profile.stops.push_back(stop);
  }
  return cc;
}

}  // namespace instances
