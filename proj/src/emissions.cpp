#include "bebplan/emissions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "bebplan/energy.hpp"
#include "bebplan/error.hpp"

namespace bebplan {

double convert_threshold(double threshold_g_per_kwh) {
  if (threshold_g_per_kwh < 0.0) {
    throw Error(ErrorCode::NegativeThreshold, std::to_string(threshold_g_per_kwh) + " g/kWh");
  }
  return threshold_g_per_kwh * kFuelVolumePerKm * kFuelDensity * kFuelEnergyDensity;
}

std::vector<EmissionClass> emission_classes(const ScenarioConfig& config) {
  std::vector<EmissionClass> out;
  for (const auto& c : config.emission_classes) {
    out.push_back({c.name, c.threshold_g_per_kwh, convert_threshold(c.threshold_g_per_kwh)});
  }
  return out;
}

std::vector<std::pair<std::string, int>> iceb_inventory(const TransformationPlan& plan, const ScenarioConfig& config,
                                                        int period) {
  const std::vector<BusType> types = build_catalog(config);
  if (plan.type_ids.size() != types.size() || plan.n.size() != types.size() || plan.p.size() != types.size()) {
    throw Error(ErrorCode::DimensionMismatch, "plan type list differs from the scenario catalog");
  }
  if (period < 1 || period > plan.periods) {
    throw Error(ErrorCode::InvalidInput, "period " + std::to_string(period) + " outside the horizon");
  }
  std::map<std::string, int> count;
  for (const auto& c : config.emission_classes) count[c.name] = 0;

  double stock = 0.0;
  double bought = 0.0;
  for (std::size_t k = 0; k < types.size(); ++k) {
    if (types[k].kind != BusKind::Iceb) continue;
    stock += plan.n[k][period - 1];
    const int h = types[k].holding_period_years;
    for (int tau = std::max(1, period - h + 1); tau <= period; ++tau) bought += plan.p[k][tau - 1];
  }
  // Initial buses leave in order of age; the oldest reach the end of the
  // holding period first.
  const int h0 = types[initial_fleet_class(types)].holding_period_years;
  int initial = 0;
  for (const auto& e : config.initial_fleet) {
    if ((1 - e.age_years) + h0 > period) {
      count[e.emission_class] += e.count;
      initial += e.count;
    }
  }
  const long held = std::lround(stock);
  const long expected = initial + std::lround(bought);
  if (held != expected) {
    throw Error(ErrorCode::InventoryMismatch, "period " + std::to_string(period) + ": plan holds " +
                                                  std::to_string(held) + " ICEBs, initial plus purchased gives " +
                                                  std::to_string(expected));
  }
  count[config.iceb.new_bus_emission_class] += static_cast<int>(std::lround(bought));

  std::vector<std::pair<std::string, int>> out;
  for (const auto& c : config.emission_classes) out.emplace_back(c.name, count[c.name]);
  return out;
}

double annual_nox(const TransformationPlan& plan, const VehicleSchedule& schedule, const Network& network,
                  const ScenarioConfig& config, int period) {
  const auto inventory = iceb_inventory(plan, config, period);
  const std::vector<BusType> types = build_catalog(config);

  std::vector<double> km;
  for (std::size_t s = 0; s < schedule.sequences.size(); ++s) {
    const int k = plan.assigned_type(s, period);
    if (k >= 0 && types[static_cast<std::size_t>(k)].kind == BusKind::Iceb) {
      const SequenceProfile prof = make_profile(schedule.sequences[s], network);
      km.push_back(prof.service_km() + prof.deadhead_km());
    }
  }
  if (km.empty()) return 0.0;

  std::map<std::string, double> factor;
  for (const auto& c : emission_classes(config)) factor[c.name] = c.g_per_km;
  std::vector<double> buses;
  for (const auto& [name, n] : inventory) buses.insert(buses.end(), static_cast<std::size_t>(n), factor[name]);
  if (buses.size() < km.size()) {
    throw Error(ErrorCode::InventoryMismatch, "fewer ICEBs than ICEB-operated sequences in period " +
                                                  std::to_string(period));
  }
  std::sort(km.begin(), km.end(), std::greater<>());
  if (config.emission_pairing == EmissionPairing::WorstCase) std::sort(buses.begin(), buses.end(), std::greater<>());
  else std::sort(buses.begin(), buses.end());

  double grams_per_day = 0.0;
  for (std::size_t i = 0; i < km.size(); ++i) grams_per_day += km[i] * buses[i];
  return grams_per_day * config.annual_operating_days / 1e6;
}

}  // namespace bebplan
