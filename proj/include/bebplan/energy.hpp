#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "bebplan/config.hpp"
#include "bebplan/network.hpp"
#include "bebplan/scheduler.hpp"

namespace bebplan {

// A trip sequence flattened into the quantities the energy balance needs.
struct SequenceProfile {
  struct Stop {
    std::string label;
    std::string start_station;
    double service_km = 0.0;
    // Net time available for charging before this trip (tau_ij - t_ij), hours.
    // Zero for the first trip: the bus leaves the depot just in time.
    double dwell_h = 0.0;
    // Dead-heading after this trip: to the next trip, or back to the depot.
    double deadhead_after_km = 0.0;
  };
  double pull_out_km = 0.0;
  std::vector<Stop> stops;

  double service_km() const;
  double deadhead_km() const;
  double consumption(double loaded_rate, double empty_rate) const {
    return loaded_rate * service_km() + empty_rate * deadhead_km();
  }
};

SequenceProfile make_profile(const TripSequence& sequence, const Network& network);

struct SocRecord {
  std::string trip;
  double soc_before = 0.0;  // q_i
  double charged = 0.0;     // w_i
  double soc_after_trip = 0.0;
};

struct SocTrace {
  std::vector<SocRecord> records;
  double usable_capacity = 0.0;  // Theta = mu * Q
  double soc_at_depot = 0.0;
  bool feasible = false;
};

// SOC below zero by more than this counts as running empty.
inline constexpr double kSocTolerance = 1e-9;

// Greedy forward simulation: leave the depot full, recharge as much as dwell
// time and headroom allow at every equipped start station.
SocTrace simulate_sequence(const SequenceProfile& profile, const BusType& bus_type,
                           const std::set<std::string>& equipped_stations, double charging_power_kw,
                           const ScenarioConfig& config);
SocTrace simulate_sequence(const TripSequence& sequence, const Network& network, const BusType& bus_type,
                           const std::set<std::string>& equipped_stations, double charging_power_kw,
                           const ScenarioConfig& config);

// Daily consumption fits into the usable capacity without any recharging.
bool ncb_feasible(const SequenceProfile& profile, const BusType& bus_type, const ScenarioConfig& config);
bool ncb_feasible(const TripSequence& sequence, const Network& network, const BusType& bus_type,
                  const ScenarioConfig& config);

inline constexpr double kCapacitySearchTolerance = 0.1;

// Smallest gross battery capacity (within 0.1 kWh) that operates the sequence
// when every candidate station offers `charging_power_kw`.
double min_battery_capacity(const SequenceProfile& profile, const std::set<std::string>& equipped_stations,
                            double charging_power_kw, const ScenarioConfig& config);
double min_battery_capacity(const TripSequence& sequence, const Network& network, double charging_power_kw,
                            const ScenarioConfig& config);

struct FeasibilityRow {
  double power_kw = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double share_pct = 0.0;
};

std::vector<FeasibilityRow> feasibility_study(const VehicleSchedule& schedule, const Network& network,
                                              const ScenarioConfig& config, const std::vector<double>& power_grid,
                                              double q_max);

void write_feasibility_csv(const std::filesystem::path& path, const std::vector<FeasibilityRow>& rows);

}  // namespace bebplan
