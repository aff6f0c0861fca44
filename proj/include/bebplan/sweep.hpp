#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bebplan/branch_and_bound.hpp"
#include "bebplan/config.hpp"
#include "bebplan/network.hpp"
#include "bebplan/plan.hpp"
#include "bebplan/scheduler.hpp"

namespace bebplan {

struct SweepSpec {
  std::vector<Scenario> scenarios = {Scenario::All, Scenario::Ic, Scenario::Nc, Scenario::Oc};
  std::vector<double> power_grid;              // kW
  std::vector<double> battery_reduction_grid;  // %/year
  ScenarioConfig base;
  SolveLimits limits;
  int workers = 1;

  // Throws InvalidInput when a grid is empty or not strictly increasing.
  void validate() const;
};

struct SweepRow {
  Scenario scenario = Scenario::All;
  double r_kw = 0.0;
  double b_pct = 0.0;
  bool solved = false;
  std::string status;
  // Fleet composition in the final period, keyed by report column
  // (iceb, ocb_<Q>, ncb_<Q>); types outside the scenario are absent.
  std::map<std::string, int> bus_counts;
  int ncf = 0;
  int ocf = 0;
  double tco = 0.0;
  double nox_t_per_year = 0.0;  // final period
  double gap = 0.0;

  ScenarioConfig config;
  std::optional<TransformationPlan> plan;
  std::vector<double> nox_by_period;
};

// Report column for a bus type: "iceb" for every ICEB class, otherwise the
// lower-case kind and capacity.
std::string report_column(const BusType& type);
std::vector<std::string> report_columns(const ScenarioConfig& config);

SweepRow solve_cell(Scenario scenario, double r_kw, double b_pct, const SweepSpec& spec, const Network& network,
                    const VehicleSchedule& schedule);

// One row per (scenario, r, b) in that nesting order. A failing cell yields a
// row with solved = false and the error in `status`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Network& network, const VehicleSchedule& schedule);

// Writes results.csv, fleet_timeline.csv, chargers.csv and assignment.csv.
void emit_reports(const std::vector<SweepRow>& rows, const VehicleSchedule& schedule, const Network& network,
                  const std::filesystem::path& out_dir);

// Parses "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace bebplan
