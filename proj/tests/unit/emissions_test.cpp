#include <doctest.h>

#include "bebplan/emissions.hpp"
#include "bebplan/tco_model.hpp"
#include "helpers.hpp"

using namespace bebplan;

namespace {

// Two parallel trips from the depot's own station, so each sequence runs
// exactly its service kilometres.
struct Fixture {
  Network network;
  VehicleSchedule schedule;
  ScenarioConfig config;
  TransformationModel model;
  TransformationPlan plan;
};

Fixture make(double km1, double km2, std::vector<InitialFleetEntry> fleet) {
  Fixture f;
  std::vector<Station> st = {{kDepotAlias, false, true}};
  f.network = Network(st, {{"T1", kDepotAlias, kDepotAlias, 300, 400, km1}, {"T2", kDepotAlias, kDepotAlias, 310, 420, km2}},
                      DeadheadMatrix{});
  f.schedule = build_schedule(f.network);
  f.config.horizon_years = 1;
  f.config.scenario = Scenario::All;
  f.config.iceb.holding_periods = {12};
  f.config.initial_fleet = std::move(fleet);
  f.model = build_mip(f.network, f.schedule, f.config);
  f.plan = empty_plan(f.model.catalog);
  return f;
}

}  // namespace

TEST_CASE("threshold conversion") {
  CHECK(convert_threshold(5.0) == doctest::Approx(29.22).epsilon(0.01 / 29.22));
  CHECK(convert_threshold(2.0) == doctest::Approx(11.69).epsilon(0.01 / 11.69));
  CHECK(convert_threshold(0.0) == 0.0);
  CHECK(convert_threshold(0.4) == doctest::Approx(0.4 * 0.00059 * 832.5 * 11.9));
  CHECK_THROWS_CODE(convert_threshold(-1.0), ErrorCode::NegativeThreshold);
}

TEST_CASE("all-BEB plan emits nothing") {
  Fixture f = make(100, 100, {});
  const auto& types = f.model.catalog.types;
  std::size_t k = 0;
  while (!types[k].is_beb()) ++k;
  for (std::size_t s = 0; s < 2; ++s) f.plan.x[s][k][0] = 1;
  f.plan.p[k][0] = f.plan.n[k][0] = 2;
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) == 0.0);
}

TEST_CASE("one EU-VI bus on 100 km") {
  Fixture f = make(100, 100, {});
  // One sequence on a new ICEB, the other on a BEB.
  f.plan.x[0][0][0] = 1;
  f.plan.p[0][0] = f.plan.n[0][0] = 1;
  const double expected = 100 * (0.4 * 0.00059 * 832.5 * 11.9) * 307 / 1e6;
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.0718).epsilon(1e-3));
}

TEST_CASE("class-to-sequence pairing") {
  Fixture f = make(100, 50, {{"EU-III", 3, 1}, {"EU-VI", 2, 1}});
  f.plan.x[0][0][0] = f.plan.x[1][0][0] = 1;
  f.plan.n[0][0] = 2;
  const double dirty = 5.0 * 0.00059 * 832.5 * 11.9;
  const double clean = 0.4 * 0.00059 * 832.5 * 11.9;
  const auto inv = iceb_inventory(f.plan, f.config, 1);
  CHECK(inv == std::vector<std::pair<std::string, int>>{{"EU-III", 1}, {"EU-V/EEV", 0}, {"EU-VI", 1}});
  // Worst case: the EU-III bus takes the 100 km day.
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) ==
        doctest::Approx((100 * dirty + 50 * clean) * 307 / 1e6));
  f.config.emission_pairing = EmissionPairing::BestCase;
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) ==
        doctest::Approx((100 * clean + 50 * dirty) * 307 / 1e6));
}

TEST_CASE("equal kilometres make the pairing irrelevant") {
  Fixture f = make(100, 100, {{"EU-III", 3, 1}, {"EU-VI", 2, 1}});
  f.plan.x[0][0][0] = f.plan.x[1][0][0] = 1;
  f.plan.n[0][0] = 2;
  const double expected = (5.0 + 0.4) * 0.00059 * 832.5 * 11.9 * 100 * 307 / 1e6;
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) == doctest::Approx(expected));
  f.config.emission_pairing = EmissionPairing::BestCase;
  CHECK(annual_nox(f.plan, f.schedule, f.network, f.config, 1) == doctest::Approx(expected));
}

TEST_CASE("inventory mismatch") {
  Fixture f = make(100, 100, {{"EU-III", 3, 1}});
  f.plan.n[0][0] = 3;
  CHECK_THROWS_CODE(iceb_inventory(f.plan, f.config, 1), ErrorCode::InventoryMismatch);
}
