#pragma once

#include <string>
#include <vector>

#include "bebplan/config.hpp"
#include "bebplan/network.hpp"
#include "bebplan/plan.hpp"
#include "bebplan/scheduler.hpp"

namespace bebplan {

// Diesel figures behind the g/kWh -> g/km conversion.
inline constexpr double kFuelVolumePerKm = 0.00059;  // m^3/km
inline constexpr double kFuelDensity = 832.5;        // kg/m^3
inline constexpr double kFuelEnergyDensity = 11.9;   // kWh/kg

// g/kWh emission threshold to g/km. Throws NegativeThreshold.
double convert_threshold(double threshold_g_per_kwh);

struct EmissionClass {
  std::string name;
  double threshold_g_per_kwh = 0.0;
  double g_per_km = 0.0;
};

std::vector<EmissionClass> emission_classes(const ScenarioConfig& config);

// ICEBs in service per emission class in `period`, after retiring the oldest
// initial buses first; buses bought within the horizon carry the new-bus class.
// Throws InventoryMismatch when the plan's ICEB stock does not match.
std::vector<std::pair<std::string, int>> iceb_inventory(const TransformationPlan& plan, const ScenarioConfig& config,
                                                        int period);

// NOx of the ICEB-operated sequences in `period`, tonnes per year. Buses are
// paired with sequences by descending daily km: dirtiest first under the
// worst-case convention, cleanest first under best-case.
double annual_nox(const TransformationPlan& plan, const VehicleSchedule& schedule, const Network& network,
                  const ScenarioConfig& config, int period);

}  // namespace bebplan
