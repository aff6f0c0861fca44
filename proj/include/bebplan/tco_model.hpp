#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bebplan/config.hpp"
#include "bebplan/energy.hpp"
#include "bebplan/network.hpp"
#include "bebplan/scheduler.hpp"
#include "bebplan/sparse_mip.hpp"

namespace bebplan {

// Column numbers of every decision variable. Period vectors are indexed by
// t - 1 for t = 1..n.
struct VariableCatalog {
  int periods = 0;
  std::vector<BusType> types;          // K
  std::vector<std::string> stations;   // R
  std::vector<int> sequence_ids;       // S, schedule order
  std::vector<std::size_t> trip_counts;

  std::vector<std::vector<std::size_t>> n, p;          // [k][t]
  std::vector<std::size_t> a;                          // [t]
  std::vector<std::vector<std::size_t>> y;             // [i][t]
  std::vector<std::vector<std::vector<std::size_t>>> x;  // [s][k][t]
  std::vector<std::vector<std::size_t>> theta;         // [s][t]
  // q has one entry per trip plus the depot arrival; w one per trip.
  std::vector<std::vector<std::vector<std::size_t>>> q;  // [s][pos][t]
  std::vector<std::vector<std::vector<std::size_t>>> w;  // [s][pos][t]

  std::size_t column_count = 0;
};

// Buses of the initial fleet expressed as purchases before t_1: period
// (t_1 - age) -> count, per type index. Only the longest-holding ICEB class
// carries entries.
using InitialPurchases = std::vector<std::map<int, int>>;
InitialPurchases initial_purchases(const ScenarioConfig& config, const std::vector<BusType>& types);

struct TransformationModel {
  SparseMip mip;
  VariableCatalog catalog;
  std::vector<SequenceProfile> profiles;
  double big_m = 0.0;
  // True when the optional depot-charger coupling rows were added; these rows
  // are not part of the reference formulation.
  bool has_depot_coupling = false;
};

TransformationModel build_mip(const Network& network, const VehicleSchedule& schedule, const ScenarioConfig& config);

// Column values of an all-ICEB plan: every sequence on one ICEB class, the
// shortfall bought in the period it appears, no chargers, SOC columns filled
// along the chain without recharging. The cheapest ICEB class is used.
std::vector<double> rounding_start(const TransformationModel& model, const ScenarioConfig& config);

}  // namespace bebplan
