#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bebplan/config.hpp"
#include "bebplan/network.hpp"
#include "bebplan/scheduler.hpp"
#include "bebplan/sparse_mip.hpp"
#include "bebplan/tco_model.hpp"

namespace bebplan {

// Cost items per period (undiscounted, index t - 1) and at the end of the
// horizon. Sale and salvage items are revenues and enter the TCO negatively.
struct CostReport {
  double fleet_initial = 0.0;
  std::vector<double> bus_purchase;
  std::vector<double> battery_purchase;
  std::vector<double> bus_sold;
  std::vector<double> infra_install;
  std::vector<double> infra_maintenance;
  std::vector<double> oper_maintenance;
  std::vector<double> oper_energy;
  double bus_salvage = 0.0;
  double battery_salvage = 0.0;
  double tco = 0.0;

  // Discounted totals of the three cost blocks.
  double fleet_total = 0.0;
  double infra_total = 0.0;
  double oper_total = 0.0;
};

// Decision values arranged by variable; same index layout as VariableCatalog.
struct TransformationPlan {
  int periods = 0;
  std::vector<std::string> type_ids;
  std::vector<std::string> stations;
  std::vector<int> sequence_ids;

  std::vector<std::vector<double>> n, p;
  std::vector<double> a;
  std::vector<std::vector<double>> y;
  std::vector<std::vector<std::vector<double>>> x;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<std::vector<double>>> q, w;

  // Type index serving sequence s in period t (largest x), -1 if none.
  int assigned_type(std::size_t s, int t) const;
  // Stations whose charger is installed in period t.
  std::vector<std::string> equipped_stations(int t) const;
};

// An all-zero plan shaped like the catalog.
TransformationPlan empty_plan(const VariableCatalog& catalog);
TransformationPlan decode_plan(const VariableCatalog& catalog, const std::vector<double>& values);
// Throws DimensionMismatch when the plan's shape differs from the catalog.
std::vector<double> encode_plan(const VariableCatalog& catalog, const TransformationPlan& plan);

// Recomputes every cost item directly from the decisions.
// Throws DimensionMismatch when the plan does not fit the scenario's catalog.
CostReport price_plan(const TransformationPlan& plan, const Network& network, const VehicleSchedule& schedule,
                      const ScenarioConfig& config);

struct RowViolation {
  std::string row;
  RowFamily family = RowFamily::Custom;
  double activity = 0.0;
  double rhs = 0.0;
};

inline constexpr double kPlanFeasibilityTolerance = 1e-6;

// Rows (and column bounds/integrality, reported with family Custom) violated
// by more than kPlanFeasibilityTolerance.
std::vector<RowViolation> validate_plan(const std::vector<double>& values, const SparseMip& mip);
std::vector<RowViolation> validate_plan(const TransformationPlan& plan, const TransformationModel& model);

nlohmann::json plan_to_json(const TransformationPlan& plan, const CostReport* costs = nullptr);
TransformationPlan plan_from_json(const nlohmann::json& j);

}  // namespace bebplan
