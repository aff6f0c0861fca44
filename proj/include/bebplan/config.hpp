#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bebplan {

enum class Scenario { All, Ic, Nc, Oc };
enum class BusKind { Iceb, Ncb, Ocb };
enum class DepotCouplingMode { None, PerBeb };
enum class EmissionPairing { WorstCase, BestCase };

std::string to_string(Scenario s);
std::string to_string(BusKind k);
Scenario parse_scenario(const std::string& s);

// Which kinds a scenario allows the operator to buy. ICEBs are always allowed.
bool scenario_allows(Scenario s, BusKind k);

struct CostAnchor {
  double power_kw = 0.0;
  double cost = 0.0;

  bool operator==(const CostAnchor&) const = default;
};

// Piecewise-linear cost at `power_kw`; exact at anchors. Throws PowerOutOfRange
// outside [first anchor, last anchor].
double interpolate_cost(const std::vector<CostAnchor>& anchors, double power_kw);

// Same as interpolate_cost inside the anchor range; beyond it the first or last
// segment is extended linearly (power sweeps go past the largest listed charger).
double extrapolate_cost(const std::vector<CostAnchor>& anchors, double power_kw);

struct EmissionClassSpec {
  std::string name;
  double threshold_g_per_kwh = 0.0;

  bool operator==(const EmissionClassSpec&) const = default;
};

struct InitialFleetEntry {
  std::string emission_class;
  int age_years = 0;
  int count = 0;

  bool operator==(const InitialFleetEntry&) const = default;
};

struct IcebParameters {
  double purchase_cost = 330000.0;
  double maintenance_cost_per_km = 0.5;
  double fuel_price_per_l = 0.97;
  double consumption_l_per_km = 0.61;
  std::optional<double> consumption_empty_l_per_km;
  std::vector<int> holding_periods = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::string new_bus_emission_class = "EU-VI";

  bool operator==(const IcebParameters&) const = default;
};

struct BebParameters {
  double purchase_cost = 350000.0;  // without battery
  double maintenance_cost_per_km = 0.44;
  double electricity_price_per_kwh = 0.13;
  double consumption_kwh_per_km = 2.06;
  std::optional<double> consumption_empty_kwh_per_km;
  std::vector<double> capacities_kwh = {100.0, 200.0, 300.0, 400.0};

  bool operator==(const BebParameters&) const = default;
};

// Fraction of loaded consumption used for dead-heading when no explicit empty
// rate is configured.
inline constexpr double kEmptyConsumptionShare = 0.75;

struct ScenarioConfig {
  int horizon_years = 20;
  Scenario scenario = Scenario::All;
  double charging_power_kw = 350.0;
  double battery_price_reduction_per_year = 0.025;
  double discount_rate = 0.05;
  double annual_operating_days = 307.0;
  double usable_soc_fraction = 0.8;
  int battery_lifetime_years = 6;
  int bus_lifetime_years = 12;
  double salvage_fraction = 0.07;
  std::vector<CostAnchor> ocf_cost_anchor_points = {{50, 30000}, {150, 90000}, {350, 134250}};
  std::vector<CostAnchor> battery_cost_anchor_points = {{50, 487.5}, {350, 780}};
  double ncf_cost = 5000.0;
  double ncf_power_kw = 50.0;
  double facility_maintenance_fraction = 0.01;
  std::vector<InitialFleetEntry> initial_fleet;
  DepotCouplingMode depot_coupling_mode = DepotCouplingMode::None;
  IcebParameters iceb;
  BebParameters beb;
  std::vector<EmissionClassSpec> emission_classes = {
      {"EU-III", 5.0}, {"EU-V/EEV", 2.0}, {"EU-VI", 0.4}};
  EmissionPairing emission_pairing = EmissionPairing::WorstCase;

  double iceb_empty_consumption() const;
  double beb_empty_consumption() const;
  // v^b: absolute salvage value shared by every bus type.
  double salvage_value() const { return salvage_fraction * iceb.purchase_cost; }
  double ocf_cost() const;
  double ocf_maintenance_cost() const { return facility_maintenance_fraction * ocf_cost(); }
  double ncf_maintenance_cost() const { return facility_maintenance_fraction * ncf_cost; }
  int initial_fleet_size() const;

  // Throws InvalidInput / NegativeValue naming the offending field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct BusType {
  std::string id;
  BusKind kind = BusKind::Iceb;
  double battery_capacity_kwh = 0.0;
  int holding_period_years = 0;
  double purchase_cost = 0.0;
  double battery_cost_per_kwh_initial = 0.0;
  double maintenance_cost_per_km = 0.0;
  double energy_price_per_unit = 0.0;
  double consumption_loaded = 0.0;
  double consumption_empty = 0.0;
  std::string emission_class;

  bool is_beb() const { return kind != BusKind::Iceb; }
};

// c_{kt}^q = c_{k0}^q * (1 - b)^t
double battery_price(const ScenarioConfig& config, const BusType& type, int period);

// Every bus type the configuration defines, regardless of scenario: ICEB
// holding classes first, then NCB and OCB types by ascending capacity.
std::vector<BusType> full_catalog(const ScenarioConfig& config);

// The types the scenario allows (set K of the model).
std::vector<BusType> build_catalog(const ScenarioConfig& config);

// Index (into build_catalog) of the ICEB class that carries the initial fleet:
// the class with the longest holding period.
std::size_t initial_fleet_class(const std::vector<BusType>& catalog);

void to_json(nlohmann::json& j, const ScenarioConfig& c);
// Parses a scenario.json object. Unknown keys are appended to `warnings`.
ScenarioConfig config_from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);

}  // namespace bebplan
