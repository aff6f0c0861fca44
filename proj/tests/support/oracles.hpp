#pragma once

#include <set>
#include <string>

#include "bebplan/config.hpp"
#include "bebplan/energy.hpp"
#include "bebplan/network.hpp"
#include "bebplan/scheduler.hpp"

namespace oracle {

// Smallest number of buses over every partition of the trips into chains
// whose consecutive trips pass the strict timing test. Exponential; meant for
// eight trips or fewer.
int min_fleet_by_partition(const bebplan::Network& network);

// Tries every recharge amount on a grid of `step` kWh at every stop and
// reports whether some choice keeps the SOC non-negative throughout.
bool charging_feasible_by_search(const bebplan::SequenceProfile& profile, const bebplan::BusType& bus,
                                 const std::set<std::string>& equipped, double power_kw,
                                 const bebplan::ScenarioConfig& config, double step = 0.5);

struct Optimum {
  double objective = 0.0;
  bool feasible = false;
  long leaves = 0;
};

// Minimum TCO by enumeration: charger installation periods per station, the
// type serving each sequence in each period (greedy SOC check for BEBs) and
// the purchase quantities of every type. Unit costs are obtained by pricing
// single-decision plans with price_plan. Only the uncoupled depot mode is
// supported.
Optimum enumerate_optimum(const bebplan::Network& network, const bebplan::VehicleSchedule& schedule,
                          const bebplan::ScenarioConfig& config);

}  // namespace oracle
