#include <doctest.h>

#include <fstream>

#include "bebplan/config.hpp"
#include "bebplan/network.hpp"
#include "helpers.hpp"

using namespace bebplan;

TEST_CASE("desk fixture loads") {
  const Dataset d = load_network(testing::kData / "desk");
  CHECK(d.network.depot().id == "DEPOT");
  CHECK(d.network.candidate_stations() == std::vector<std::string>{"HBF", "UNI"});
  CHECK(d.network.trips().size() == 28);
  CHECK(d.config.initial_fleet_size() == 4);
  CHECK(d.warnings.empty());
}

TEST_CASE("network invariants") {
  const Trip a{"A1", "X", "Y", 100, 130, 10};
  SUBCASE("missing depot") {
    DeadheadMatrix dh;
    CHECK_THROWS_CODE(Network({{"X", false, false}, {"Y", false, false}}, {a}, dh), ErrorCode::MissingDepot);
  }
  SUBCASE("duplicate label") {
    CHECK_THROWS_CODE(testing::make_network({a, a}, {"X", "Y"}), ErrorCode::DuplicateTripLabel);
  }
  SUBCASE("negative distance") {
    Trip bad = a;
    bad.distance_km = -1;
    CHECK_THROWS_CODE(testing::make_network({bad}, {"X", "Y"}), ErrorCode::NegativeValue);
  }
  SUBCASE("missing pull-out leg") {
    DeadheadMatrix dh;
    dh.set("Y", kDepotAlias, {1, 1});
    CHECK_THROWS_CODE(Network({{kDepotAlias, false, true}, {"X", false, false}, {"Y", false, false}}, {a}, dh),
                      ErrorCode::IncompleteDeadheadMatrix);
  }
  SUBCASE("missing leg between trips") {
    const Trip b{"B1", "X", "Y", 200, 230, 10};
    DeadheadMatrix dh;
    for (const char* s : {"X", "Y"}) {
      dh.set(kDepotAlias, s, {1, 1});
      dh.set(s, kDepotAlias, {1, 1});
    }
    CHECK_THROWS_CODE(Network({{kDepotAlias, false, true}, {"X", false, false}, {"Y", false, false}}, {a, b}, dh),
                      ErrorCode::IncompleteDeadheadMatrix);
  }
  SUBCASE("candidate must start a trip") {
    CHECK_THROWS_CODE(testing::make_network({a}, {"X", "Y"}, {"Y"}), ErrorCode::InvalidInput);
  }
  SUBCASE("same-station legs are zero") {
    const Network n = testing::make_network({a}, {"X", "Y"});
    CHECK(n.between(a, Trip{"Z", "Y", "X", 200, 220, 3}).distance_km == 0.0);
    CHECK(n.pull_out(a).distance_km == 5.0);
  }
}

TEST_CASE("dataset round trip") {
  const Dataset d = load_network(testing::kData / "desk");
  const auto dir = testing::scratch_dir("roundtrip");
  write_dataset(dir, d.network, d.config);
  const Dataset back = load_network(dir);
  CHECK(back.network == d.network);
  CHECK(back.config == d.config);
}

TEST_CASE("unknown columns warn, missing columns fail") {
  const auto dir = testing::scratch_dir("columns");
  for (const char* f : {"stations.csv", "trips.csv", "deadheads.csv", "fleet.csv", "scenario.json"}) {
    std::filesystem::copy_file(testing::kData / "toy3" / f, dir / f);
  }
  {
    std::ofstream out(dir / "fleet.csv");
    out << "emission_class,age_years,count,colour\nEU-VI,2,1,red\n";
  }
  const Dataset d = load_network(dir);
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.warnings[0].find("colour") != std::string::npos);
  {
    std::ofstream out(dir / "fleet.csv");
    out << "emission_class,count\nEU-VI,1\n";
  }
  CHECK_THROWS_AS(load_network(dir), Error);
}

TEST_CASE("scenario.json") {
  nlohmann::json j = {{"horizon_years", 3}, {"scenario", "nc"}, {"charging_power_kw", 150},
                      {"battery_price_reduction_per_year", 0.05}};
  std::vector<std::string> warnings;
  ScenarioConfig c = config_from_json(j, &warnings);
  CHECK(c.scenario == Scenario::Nc);
  CHECK(c.horizon_years == 3);
  CHECK(warnings.empty());

  j["frobnicate"] = 1;
  config_from_json(j, &warnings);
  CHECK(warnings.size() == 1);

  j.erase("charging_power_kw");
  CHECK_THROWS_CODE(config_from_json(j), ErrorCode::InvalidInput);

  nlohmann::json full;
  to_json(full, c);
  CHECK(config_from_json(full) == c);
}

TEST_CASE("cost interpolation") {
  const ScenarioConfig c;
  // Anchor values come back exactly, midpoints are the mean of the anchors.
  CHECK(interpolate_cost(c.ocf_cost_anchor_points, 50) == 30000);
  CHECK(interpolate_cost(c.ocf_cost_anchor_points, 150) == 90000);
  CHECK(interpolate_cost(c.ocf_cost_anchor_points, 350) == 134250);
  CHECK(interpolate_cost(c.battery_cost_anchor_points, 50) == 487.5);
  CHECK(interpolate_cost(c.battery_cost_anchor_points, 350) == 780);
  CHECK(interpolate_cost(c.ocf_cost_anchor_points, 100) == doctest::Approx(60000).epsilon(1e-12));
  CHECK(interpolate_cost(c.ocf_cost_anchor_points, 250) == doctest::Approx(112125).epsilon(1e-12));
  CHECK(interpolate_cost(c.battery_cost_anchor_points, 200) == doctest::Approx(633.75).epsilon(1e-12));
  CHECK_THROWS_CODE(interpolate_cost(c.ocf_cost_anchor_points, 450), ErrorCode::PowerOutOfRange);
  CHECK_THROWS_CODE(interpolate_cost(c.ocf_cost_anchor_points, 10), ErrorCode::PowerOutOfRange);
  // Beyond the last anchor the final segment continues: slope 44250/200 per kW.
  CHECK(extrapolate_cost(c.ocf_cost_anchor_points, 450) == doctest::Approx(134250 + 100 * 44250.0 / 200));
  CHECK(extrapolate_cost(c.ocf_cost_anchor_points, 250) == interpolate_cost(c.ocf_cost_anchor_points, 250));
}

TEST_CASE("bus catalog") {
  ScenarioConfig c;
  CHECK(full_catalog(c).size() == 12 + 4 + 4);
  c.scenario = Scenario::Ic;
  CHECK(build_catalog(c).size() == 12);
  c.scenario = Scenario::Oc;
  const auto k = build_catalog(c);
  CHECK(k.size() == 16);
  CHECK(k[initial_fleet_class(k)].holding_period_years == 12);
  // Battery price decays geometrically from the anchor value.
  CHECK(battery_price(c, k.back(), 2) == doctest::Approx(k.back().battery_cost_per_kwh_initial * 0.975 * 0.975));
}

TEST_CASE("config validation") {
  ScenarioConfig c;
  c.usable_soc_fraction = 1.5;
  CHECK_THROWS_CODE(c.validate(), ErrorCode::InvalidInput);
  c = ScenarioConfig{};
  c.initial_fleet = {{"EU-VI", 13, 1}};
  CHECK_THROWS_CODE(c.validate(), ErrorCode::InvalidInput);
  c = ScenarioConfig{};
  c.horizon_years = 0;
  CHECK_THROWS_CODE(c.validate(), ErrorCode::NoPeriods);
}
