#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bebplan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

// Row families of the transformation model; Custom covers rows added by hand
// (tests, MPS files from elsewhere).
enum class RowFamily {
  StockBalance,      // fleet holding balance per type and period
  DepotMonotone,     // depot chargers are never removed
  OcfMonotone,       // station chargers are never removed
  Assignment,        // each sequence served by exactly one type
  FleetCover,        // enough buses of each type
  NcbRange,          // overnight-only buses fit the day into one charge
  CapacityLink,      // Theta limited by the assigned OCB's usable capacity
  InitialSoc,        // SOC before the first trip
  SocBalance,        // SOC propagation along arcs
  ChargeTime,        // recharge limited by dwell time and charger presence
  ChargeHeadroom,    // recharge limited by remaining capacity
  DepotCoupling,     // optional: one depot charger per BEB
  Custom,
};

std::string to_string(RowFamily f);

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool is_integer = false;
  double objective = 0.0;
};

struct Row {
  std::string name;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  RowFamily family = RowFamily::Custom;
};

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// Minimisation problem  min c'x + c0  s.t. row activities vs rhs, bounds.
struct SparseMip {
  std::string name = "model";
  std::vector<Column> columns;
  std::vector<Row> rows;
  std::vector<Triplet> coefficients;
  double objective_constant = 0.0;

  std::size_t add_column(Column c);
  std::size_t add_row(Row r);
  void add_coefficient(std::size_t row, std::size_t col, double value);

  double objective_value(std::span<const double> x) const;
  std::vector<double> row_activities(std::span<const double> x) const;

  // Throws InvalidInput when a triplet references a missing row/column or a
  // value is not finite.
  void check() const;
};

}  // namespace bebplan
