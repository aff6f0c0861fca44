#include <doctest.h>

#include <random>

#include "bebplan/energy.hpp"
#include "helpers.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace bebplan;

namespace {

struct Case {
  SequenceProfile profile;
  BusType bus;
  ScenarioConfig config;
};

// Pull-out 4 km, then 20 km from A, 2 km empty, 20 km from B after a
// 10 minute dwell, 3 km back. 2.0 / 1.5 kWh per km, 80 kWh usable.
Case hand_case() {
  Case c;
  c.config.beb.consumption_kwh_per_km = 2.0;
  c.config.beb.consumption_empty_kwh_per_km = 1.5;
  c.profile.pull_out_km = 4;
  c.profile.stops = {{"T1", "A", 20, 0.0, 2}, {"T2", "B", 20, 10.0 / 60.0, 3}};
  c.bus.id = "OCB_100";
  c.bus.kind = BusKind::Ocb;
  c.bus.battery_capacity_kwh = 100;
  c.bus.consumption_loaded = 2.0;
  c.bus.consumption_empty = 1.5;
  return c;
}

}  // namespace

TEST_CASE("hand-traced SOC") {
  const Case c = hand_case();
  // 80 - 6 = 74; after T1 34, after the leg 31; +20 at B (120 kW for 10 min);
  // after T2 11, at the depot 6.5.
  const SocTrace tr = simulate_sequence(c.profile, c.bus, {"B"}, 120.0, c.config);
  REQUIRE(tr.records.size() == 2);
  CHECK(tr.feasible);
  CHECK(tr.records[0].soc_before == doctest::Approx(74));
  CHECK(tr.records[0].charged == 0.0);
  CHECK(tr.records[1].soc_before == doctest::Approx(31));
  CHECK(tr.records[1].charged == doctest::Approx(20));
  CHECK(tr.records[1].soc_after_trip == doctest::Approx(11));
  CHECK(tr.soc_at_depot == doctest::Approx(6.5));

  CHECK_FALSE(simulate_sequence(c.profile, c.bus, {"A"}, 120.0, c.config).feasible);
  // Headroom caps the recharge: 600 kW could give 100 kWh, only 49 fit.
  CHECK(simulate_sequence(c.profile, c.bus, {"B"}, 600.0, c.config).records[1].charged == doctest::Approx(49));
}

TEST_CASE("feasible traces satisfy the energy rows") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto cc = instances::random_charging_case(rng);
    const SocTrace tr = simulate_sequence(cc.profile, cc.bus, cc.equipped, cc.power_kw, cc.config);
    if (!tr.feasible) continue;
    ++checked;
    for (std::size_t p = 0; p < tr.records.size(); ++p) {
      const auto& stop = cc.profile.stops[p];
      const auto& rec = tr.records[p];
      const double limit = cc.equipped.count(stop.start_station) ? cc.power_kw * stop.dwell_h : 0.0;
      CHECK(rec.soc_before >= -1e-9);
      CHECK(rec.charged <= limit + 1e-9);
      CHECK(rec.soc_before + rec.charged <= tr.usable_capacity + 1e-9);
    }
    CHECK(tr.soc_at_depot >= -1e-9);
  }
  CHECK(checked > 50);
}

TEST_CASE("greedy agrees with the grid search") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto cc = instances::random_charging_case(rng);
    CHECK(simulate_sequence(cc.profile, cc.bus, cc.equipped, cc.power_kw, cc.config).feasible ==
          oracle::charging_feasible_by_search(cc.profile, cc.bus, cc.equipped, cc.power_kw, cc.config));
  }
}

TEST_CASE("night-charged buses") {
  Case c = hand_case();
  c.bus.kind = BusKind::Ncb;
  // 6 + 40 + 3 + 40 + 4.5 = 93.5 kWh against 80 usable.
  CHECK_FALSE(ncb_feasible(c.profile, c.bus, c.config));
  c.bus.battery_capacity_kwh = 93.5 / 0.8;
  CHECK(ncb_feasible(c.profile, c.bus, c.config));
  CHECK_THROWS_CODE(simulate_sequence(c.profile, BusType{}, {}, 100, c.config), ErrorCode::NotABev);
  CHECK_THROWS_CODE(ncb_feasible(c.profile, BusType{}, c.config), ErrorCode::NotAnNcb);
}

TEST_CASE("minimum capacity") {
  const Case c = hand_case();
  // Without charging the day needs 93.5 kWh usable.
  const double none = min_battery_capacity(c.profile, {}, 0.0, c.config);
  CHECK(none == doctest::Approx(93.5 / 0.8).epsilon(0.1 / 116.0));
  double previous = none;
  for (double r : {50.0, 100.0, 200.0, 400.0}) {
    const double q = min_battery_capacity(c.profile, {"B"}, r, c.config);
    CHECK(q <= previous + kCapacitySearchTolerance);
    CHECK(q <= min_battery_capacity(c.profile, {}, r, c.config) + kCapacitySearchTolerance);
    previous = q;
  }
}

TEST_CASE("feasibility study on the desk fixture") {
  const Dataset d = load_network(testing::kData / "desk");
  const VehicleSchedule s = build_schedule(d.network);
  const auto rows = feasibility_study(s, d.network, d.config, {50, 150, 250, 350, 450}, 400);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].share_pct >= rows[i - 1].share_pct);
    CHECK(rows[i].median <= rows[i - 1].median + kCapacitySearchTolerance);
  }
  for (const auto& r : rows) CHECK((r.min <= r.q1 && r.q1 <= r.median && r.median <= r.q3 && r.q3 <= r.max));
  // Larger batteries never lower the share.
  const auto big = feasibility_study(s, d.network, d.config, {50}, 600);
  CHECK(big[0].share_pct >= rows[0].share_pct);
  CHECK(rows[0].share_pct < 100.0);
}
