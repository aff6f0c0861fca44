#include "bebplan/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bebplan/error.hpp"

namespace bebplan {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::All: return "all";
    case Scenario::Ic: return "ic";
    case Scenario::Nc: return "nc";
    case Scenario::Oc: return "oc";
  }
  return "all";
}

std::string to_string(BusKind k) {
  switch (k) {
    case BusKind::Iceb: return "ICEB";
    case BusKind::Ncb: return "NCB";
    case BusKind::Ocb: return "OCB";
  }
  return "ICEB";
}

Scenario parse_scenario(const std::string& s) {
  if (s == "all") return Scenario::All;
  if (s == "ic") return Scenario::Ic;
  if (s == "nc") return Scenario::Nc;
  if (s == "oc") return Scenario::Oc;
  throw Error(ErrorCode::InvalidInput, "unknown scenario '" + s + "'");
}

bool scenario_allows(Scenario s, BusKind k) {
  switch (k) {
    case BusKind::Iceb: return true;
    case BusKind::Ncb: return s == Scenario::All || s == Scenario::Nc;
    case BusKind::Ocb: return s == Scenario::All || s == Scenario::Oc;
  }
  return false;
}

namespace {

void check_anchors(const std::vector<CostAnchor>& anchors) {
  if (anchors.empty()) throw Error(ErrorCode::InvalidInput, "empty cost anchor list");
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (!(anchors[i].power_kw > anchors[i - 1].power_kw)) {
      throw Error(ErrorCode::InvalidInput, "cost anchors must be strictly increasing in power");
    }
  }
}

double on_segment(const CostAnchor& a, const CostAnchor& b, double power_kw) {
  const double w = (power_kw - a.power_kw) / (b.power_kw - a.power_kw);
  return a.cost + w * (b.cost - a.cost);
}

}  // namespace

double interpolate_cost(const std::vector<CostAnchor>& anchors, double power_kw) {
  check_anchors(anchors);
  if (power_kw < anchors.front().power_kw || power_kw > anchors.back().power_kw) {
    std::ostringstream msg;
    msg << power_kw << " kW outside [" << anchors.front().power_kw << ", "
        << anchors.back().power_kw << "]";
    throw Error(ErrorCode::PowerOutOfRange, msg.str());
  }
  for (const auto& a : anchors) {
    if (a.power_kw == power_kw) return a.cost;
  }
  auto hi = std::upper_bound(anchors.begin(), anchors.end(), power_kw,
                             [](double p, const CostAnchor& a) { return p < a.power_kw; });
  return on_segment(*(hi - 1), *hi, power_kw);
}

double extrapolate_cost(const std::vector<CostAnchor>& anchors, double power_kw) {
  check_anchors(anchors);
  if (anchors.size() == 1) return anchors.front().cost;
  if (power_kw < anchors.front().power_kw) return on_segment(anchors[0], anchors[1], power_kw);
  if (power_kw > anchors.back().power_kw) {
    return on_segment(anchors[anchors.size() - 2], anchors.back(), power_kw);
  }
  return interpolate_cost(anchors, power_kw);
}

double ScenarioConfig::iceb_empty_consumption() const {
  return iceb.consumption_empty_l_per_km.value_or(kEmptyConsumptionShare * iceb.consumption_l_per_km);
}

double ScenarioConfig::beb_empty_consumption() const {
  return beb.consumption_empty_kwh_per_km.value_or(kEmptyConsumptionShare *
                                                   beb.consumption_kwh_per_km);
}

double ScenarioConfig::ocf_cost() const {
  return extrapolate_cost(ocf_cost_anchor_points, charging_power_kw);
}

int ScenarioConfig::initial_fleet_size() const {
  int total = 0;
  for (const auto& e : initial_fleet) total += e.count;
  return total;
}

void ScenarioConfig::validate() const {
  auto fail = [](ErrorCode code, const std::string& what) { throw Error(code, what); };
  if (horizon_years <= 0) fail(ErrorCode::NoPeriods, "horizon_years must be positive");
  if (!(usable_soc_fraction > 0.0 && usable_soc_fraction <= 1.0)) {
    fail(ErrorCode::InvalidInput, "usable_soc_fraction must lie in (0, 1]");
  }
  if (discount_rate < 0.0) fail(ErrorCode::NegativeValue, "discount_rate");
  if (!(battery_price_reduction_per_year >= 0.0 && battery_price_reduction_per_year < 1.0)) {
    fail(ErrorCode::InvalidInput, "battery_price_reduction_per_year must lie in [0, 1)");
  }
  if (!(annual_operating_days > 0.0)) fail(ErrorCode::InvalidInput, "annual_operating_days must be positive");
  if (charging_power_kw < 0.0) fail(ErrorCode::NegativeValue, "charging_power_kw");
  if (battery_lifetime_years <= 0) fail(ErrorCode::InvalidInput, "battery_lifetime_years must be positive");
  if (bus_lifetime_years <= 0) fail(ErrorCode::InvalidInput, "bus_lifetime_years must be positive");
  if (salvage_fraction < 0.0) fail(ErrorCode::NegativeValue, "salvage_fraction");
  if (ncf_cost < 0.0) fail(ErrorCode::NegativeValue, "ncf_cost");
  if (facility_maintenance_fraction < 0.0) fail(ErrorCode::NegativeValue, "facility_maintenance_fraction");
  check_anchors(ocf_cost_anchor_points);
  check_anchors(battery_cost_anchor_points);
  for (const auto& a : ocf_cost_anchor_points) {
    if (a.cost < 0.0) fail(ErrorCode::NegativeValue, "ocf_cost_anchor_points");
  }
  for (const auto& a : battery_cost_anchor_points) {
    if (a.cost < 0.0) fail(ErrorCode::NegativeValue, "battery_cost_anchor_points");
  }
  if (iceb.holding_periods.empty()) fail(ErrorCode::InvalidInput, "iceb.holding_periods is empty");
  for (int h : iceb.holding_periods) {
    if (h < 1 || h > bus_lifetime_years) {
      fail(ErrorCode::InvalidInput, "iceb holding period " + std::to_string(h) +
                                        " outside [1, bus_lifetime_years]");
    }
  }
  std::set<int> unique_h(iceb.holding_periods.begin(), iceb.holding_periods.end());
  if (unique_h.size() != iceb.holding_periods.size()) {
    fail(ErrorCode::InvalidInput, "duplicate iceb holding period");
  }
  for (double q : beb.capacities_kwh) {
    if (!(q > 0.0)) fail(ErrorCode::InvalidInput, "BEB capacities must be positive");
  }
  for (double v : {iceb.purchase_cost, iceb.maintenance_cost_per_km, iceb.fuel_price_per_l,
                   iceb.consumption_l_per_km, beb.purchase_cost, beb.maintenance_cost_per_km,
                   beb.electricity_price_per_kwh, beb.consumption_kwh_per_km}) {
    if (v < 0.0) fail(ErrorCode::NegativeValue, "bus cost or consumption parameter");
  }
  const int h_max = *std::max_element(iceb.holding_periods.begin(), iceb.holding_periods.end());
  for (const auto& e : initial_fleet) {
    if (e.count < 0) fail(ErrorCode::NegativeValue, "initial fleet count for " + e.emission_class);
    if (e.age_years < 1 || e.age_years > h_max) {
      fail(ErrorCode::InvalidInput, "initial fleet age " + std::to_string(e.age_years) +
                                        " outside [1, " + std::to_string(h_max) + "]");
    }
    bool known = std::any_of(emission_classes.begin(), emission_classes.end(),
                             [&](const auto& c) { return c.name == e.emission_class; });
    if (!known) fail(ErrorCode::InvalidInput, "unknown emission class " + e.emission_class);
  }
  for (const auto& c : emission_classes) {
    if (c.threshold_g_per_kwh < 0.0) fail(ErrorCode::NegativeThreshold, c.name);
  }
}

double battery_price(const ScenarioConfig& config, const BusType& type, int period) {
  return type.battery_cost_per_kwh_initial *
         std::pow(1.0 - config.battery_price_reduction_per_year, period);
}

std::vector<BusType> full_catalog(const ScenarioConfig& config) {
  std::vector<BusType> out;
  std::vector<int> holding = config.iceb.holding_periods;
  std::sort(holding.begin(), holding.end());
  for (int h : holding) {
    BusType t;
    t.id = "ICEB_h" + std::to_string(h);
    t.kind = BusKind::Iceb;
    t.holding_period_years = h;
    t.purchase_cost = config.iceb.purchase_cost;
    t.maintenance_cost_per_km = config.iceb.maintenance_cost_per_km;
    t.energy_price_per_unit = config.iceb.fuel_price_per_l;
    t.consumption_loaded = config.iceb.consumption_l_per_km;
    t.consumption_empty = config.iceb_empty_consumption();
    t.emission_class = config.iceb.new_bus_emission_class;
    out.push_back(t);
  }
  std::vector<double> caps = config.beb.capacities_kwh;
  std::sort(caps.begin(), caps.end());
  for (BusKind kind : {BusKind::Ncb, BusKind::Ocb}) {
    // Night chargers run at the fixed depot power; opportunity buses need the
    // battery rated for the network charging power.
    const double power = kind == BusKind::Ncb ? config.ncf_power_kw : config.charging_power_kw;
    const double per_kwh = extrapolate_cost(config.battery_cost_anchor_points, power);
    for (double q : caps) {
      BusType t;
      std::ostringstream id;
      id << to_string(kind) << '_' << q;
      t.id = id.str();
      t.kind = kind;
      t.battery_capacity_kwh = q;
      t.holding_period_years = config.bus_lifetime_years;
      t.purchase_cost = config.beb.purchase_cost;
      t.battery_cost_per_kwh_initial = per_kwh;
      t.maintenance_cost_per_km = config.beb.maintenance_cost_per_km;
      t.energy_price_per_unit = config.beb.electricity_price_per_kwh;
      t.consumption_loaded = config.beb.consumption_kwh_per_km;
      t.consumption_empty = config.beb_empty_consumption();
      out.push_back(t);
    }
  }
  return out;
}

std::vector<BusType> build_catalog(const ScenarioConfig& config) {
  std::vector<BusType> all = full_catalog(config);
  std::vector<BusType> out;
  for (auto& t : all) {
    if (scenario_allows(config.scenario, t.kind)) out.push_back(std::move(t));
  }
  return out;
}

std::size_t initial_fleet_class(const std::vector<BusType>& catalog) {
  std::size_t best = catalog.size();
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    if (catalog[k].kind != BusKind::Iceb) continue;
    if (best == catalog.size() || catalog[k].holding_period_years > catalog[best].holding_period_years) {
      best = k;
    }
  }
  if (best == catalog.size()) throw Error(ErrorCode::NoPurchasableTypes, "catalog has no ICEB class");
  return best;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json anchors_json(const std::vector<CostAnchor>& anchors) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : anchors) arr.push_back({a.power_kw, a.cost});
  return arr;
}

std::vector<CostAnchor> anchors_from(const nlohmann::json& j, const char* field) {
  std::vector<CostAnchor> out;
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, std::string(field) + " must be an array");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) {
      throw Error(ErrorCode::InvalidInput, std::string(field) + " entries must be [power_kw, cost]");
    }
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

const char* coupling_name(DepotCouplingMode m) { return m == DepotCouplingMode::None ? "none" : "per_beb"; }
const char* pairing_name(EmissionPairing p) {
  return p == EmissionPairing::WorstCase ? "worst_case" : "best_case";
}

template <typename T>
void take(const nlohmann::json& obj, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (auto it = obj.find(key); it != obj.end()) out = it->template get<T>();
}

void warn_unknown(const nlohmann::json& obj, const std::set<std::string>& seen, const std::string& where,
                  std::vector<std::string>* warnings) {
  if (!warnings) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!seen.count(it.key())) warnings->push_back("unknown field '" + it.key() + "' in " + where);
  }
}

}  // namespace

void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = nlohmann::json::object();
  j["horizon_years"] = c.horizon_years;
  j["scenario"] = to_string(c.scenario);
  j["charging_power_kw"] = c.charging_power_kw;
  j["battery_price_reduction_per_year"] = c.battery_price_reduction_per_year;
  j["discount_rate"] = c.discount_rate;
  j["annual_operating_days"] = c.annual_operating_days;
  j["usable_soc_fraction"] = c.usable_soc_fraction;
  j["battery_lifetime_years"] = c.battery_lifetime_years;
  j["bus_lifetime_years"] = c.bus_lifetime_years;
  j["salvage_fraction"] = c.salvage_fraction;
  j["ocf_cost_anchor_points"] = anchors_json(c.ocf_cost_anchor_points);
  j["battery_cost_anchor_points"] = anchors_json(c.battery_cost_anchor_points);
  j["ncf_cost"] = c.ncf_cost;
  j["ncf_power_kw"] = c.ncf_power_kw;
  j["facility_maintenance_fraction"] = c.facility_maintenance_fraction;
  j["depot_coupling_mode"] = coupling_name(c.depot_coupling_mode);
  j["emission_pairing"] = pairing_name(c.emission_pairing);

  nlohmann::json iceb;
  iceb["purchase_cost"] = c.iceb.purchase_cost;
  iceb["maintenance_cost_per_km"] = c.iceb.maintenance_cost_per_km;
  iceb["fuel_price_per_l"] = c.iceb.fuel_price_per_l;
  iceb["consumption_l_per_km"] = c.iceb.consumption_l_per_km;
  if (c.iceb.consumption_empty_l_per_km) iceb["consumption_empty_l_per_km"] = *c.iceb.consumption_empty_l_per_km;
  iceb["holding_periods"] = c.iceb.holding_periods;
  iceb["new_bus_emission_class"] = c.iceb.new_bus_emission_class;
  j["iceb"] = iceb;

  nlohmann::json beb;
  beb["purchase_cost"] = c.beb.purchase_cost;
  beb["maintenance_cost_per_km"] = c.beb.maintenance_cost_per_km;
  beb["electricity_price_per_kwh"] = c.beb.electricity_price_per_kwh;
  beb["consumption_kwh_per_km"] = c.beb.consumption_kwh_per_km;
  if (c.beb.consumption_empty_kwh_per_km) beb["consumption_empty_kwh_per_km"] = *c.beb.consumption_empty_kwh_per_km;
  beb["capacities_kwh"] = c.beb.capacities_kwh;
  j["beb"] = beb;

  nlohmann::json classes = nlohmann::json::array();
  for (const auto& e : c.emission_classes) classes.push_back({{"name", e.name}, {"threshold_g_per_kwh", e.threshold_g_per_kwh}});
  j["emission_classes"] = classes;
}

ScenarioConfig config_from_json(const nlohmann::json& j, std::vector<std::string>* warnings) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "scenario.json must hold one object");
  for (const char* required : {"horizon_years", "scenario", "charging_power_kw",
                               "battery_price_reduction_per_year"}) {
    if (!j.contains(required)) {
      throw Error(ErrorCode::InvalidInput, std::string("scenario.json missing required field '") + required + "'");
    }
  }
  ScenarioConfig c;
  std::set<std::string> seen;
  try {
    take(j, "horizon_years", c.horizon_years, seen);
    std::string scenario = to_string(c.scenario);
    take(j, "scenario", scenario, seen);
    c.scenario = parse_scenario(scenario);
    take(j, "charging_power_kw", c.charging_power_kw, seen);
    take(j, "battery_price_reduction_per_year", c.battery_price_reduction_per_year, seen);
    take(j, "discount_rate", c.discount_rate, seen);
    take(j, "annual_operating_days", c.annual_operating_days, seen);
    take(j, "usable_soc_fraction", c.usable_soc_fraction, seen);
    take(j, "battery_lifetime_years", c.battery_lifetime_years, seen);
    take(j, "bus_lifetime_years", c.bus_lifetime_years, seen);
    take(j, "salvage_fraction", c.salvage_fraction, seen);
    take(j, "ncf_cost", c.ncf_cost, seen);
    take(j, "ncf_power_kw", c.ncf_power_kw, seen);
    take(j, "facility_maintenance_fraction", c.facility_maintenance_fraction, seen);
    seen.insert("ocf_cost_anchor_points");
    if (j.contains("ocf_cost_anchor_points")) {
      c.ocf_cost_anchor_points = anchors_from(j["ocf_cost_anchor_points"], "ocf_cost_anchor_points");
    }
    seen.insert("battery_cost_anchor_points");
    if (j.contains("battery_cost_anchor_points")) {
      c.battery_cost_anchor_points = anchors_from(j["battery_cost_anchor_points"], "battery_cost_anchor_points");
    }
    std::string coupling = coupling_name(c.depot_coupling_mode);
    take(j, "depot_coupling_mode", coupling, seen);
    if (coupling == "none") c.depot_coupling_mode = DepotCouplingMode::None;
    else if (coupling == "per_beb") c.depot_coupling_mode = DepotCouplingMode::PerBeb;
    else throw Error(ErrorCode::InvalidInput, "depot_coupling_mode must be none or per_beb");
    std::string pairing = pairing_name(c.emission_pairing);
    take(j, "emission_pairing", pairing, seen);
    if (pairing == "worst_case") c.emission_pairing = EmissionPairing::WorstCase;
    else if (pairing == "best_case") c.emission_pairing = EmissionPairing::BestCase;
    else throw Error(ErrorCode::InvalidInput, "emission_pairing must be worst_case or best_case");

    seen.insert("iceb");
    if (auto it = j.find("iceb"); it != j.end()) {
      std::set<std::string> s;
      take(*it, "purchase_cost", c.iceb.purchase_cost, s);
      take(*it, "maintenance_cost_per_km", c.iceb.maintenance_cost_per_km, s);
      take(*it, "fuel_price_per_l", c.iceb.fuel_price_per_l, s);
      take(*it, "consumption_l_per_km", c.iceb.consumption_l_per_km, s);
      s.insert("consumption_empty_l_per_km");
      if (it->contains("consumption_empty_l_per_km")) {
        c.iceb.consumption_empty_l_per_km = (*it)["consumption_empty_l_per_km"].get<double>();
      }
      take(*it, "holding_periods", c.iceb.holding_periods, s);
      take(*it, "new_bus_emission_class", c.iceb.new_bus_emission_class, s);
      warn_unknown(*it, s, "iceb", warnings);
    }
    seen.insert("beb");
    if (auto it = j.find("beb"); it != j.end()) {
      std::set<std::string> s;
      take(*it, "purchase_cost", c.beb.purchase_cost, s);
      take(*it, "maintenance_cost_per_km", c.beb.maintenance_cost_per_km, s);
      take(*it, "electricity_price_per_kwh", c.beb.electricity_price_per_kwh, s);
      take(*it, "consumption_kwh_per_km", c.beb.consumption_kwh_per_km, s);
      s.insert("consumption_empty_kwh_per_km");
      if (it->contains("consumption_empty_kwh_per_km")) {
        c.beb.consumption_empty_kwh_per_km = (*it)["consumption_empty_kwh_per_km"].get<double>();
      }
      take(*it, "capacities_kwh", c.beb.capacities_kwh, s);
      warn_unknown(*it, s, "beb", warnings);
    }
    seen.insert("emission_classes");
    if (auto it = j.find("emission_classes"); it != j.end()) {
      c.emission_classes.clear();
      for (const auto& e : *it) {
        c.emission_classes.push_back({e.at("name").get<std::string>(), e.at("threshold_g_per_kwh").get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scenario.json: ") + e.what());
  }
  warn_unknown(j, seen, "scenario.json", warnings);
  return c;
}

}  // namespace bebplan
