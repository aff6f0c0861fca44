#include "bebplan/sparse_mip.hpp"

#include <cmath>

#include "bebplan/error.hpp"

namespace bebplan {

std::string to_string(RowFamily f) {
  switch (f) {
    case RowFamily::StockBalance: return "stock";
    case RowFamily::DepotMonotone: return "ncf_monotone";
    case RowFamily::OcfMonotone: return "ocf_monotone";
    case RowFamily::Assignment: return "assign";
    case RowFamily::FleetCover: return "cover";
    case RowFamily::NcbRange: return "ncb_range";
    case RowFamily::CapacityLink: return "theta_link";
    case RowFamily::InitialSoc: return "soc_start";
    case RowFamily::SocBalance: return "soc_flow";
    case RowFamily::ChargeTime: return "charge_time";
    case RowFamily::ChargeHeadroom: return "charge_headroom";
    case RowFamily::DepotCoupling: return "depot_coupling";
    case RowFamily::Custom: return "custom";
  }
  return "custom";
}

std::size_t SparseMip::add_column(Column c) {
  columns.push_back(std::move(c));
  return columns.size() - 1;
}

std::size_t SparseMip::add_row(Row r) {
  rows.push_back(std::move(r));
  return rows.size() - 1;
}

void SparseMip::add_coefficient(std::size_t row, std::size_t col, double value) {
  if (value != 0.0) coefficients.push_back({row, col, value});
}

double SparseMip::objective_value(std::span<const double> x) const {
  double z = objective_constant;
  for (std::size_t j = 0; j < columns.size(); ++j) z += columns[j].objective * x[j];
  return z;
}

std::vector<double> SparseMip::row_activities(std::span<const double> x) const {
  std::vector<double> act(rows.size(), 0.0);
  for (const auto& t : coefficients) act[t.row] += t.value * x[t.col];
  return act;
}

void SparseMip::check() const {
  for (const auto& t : coefficients) {
    if (t.row >= rows.size() || t.col >= columns.size()) {
      throw Error(ErrorCode::InvalidInput, "coefficient references a missing row or column");
    }
    if (!std::isfinite(t.value)) {
      throw Error(ErrorCode::InvalidInput, "non-finite coefficient in row " + rows[t.row].name);
    }
  }
  for (const auto& r : rows) {
    if (!std::isfinite(r.rhs)) throw Error(ErrorCode::InvalidInput, "non-finite rhs in row " + r.name);
  }
  for (const auto& c : columns) {
    if (!std::isfinite(c.objective)) throw Error(ErrorCode::InvalidInput, "non-finite cost on " + c.name);
    if (c.lower > c.upper) throw Error(ErrorCode::InvalidInput, "empty bounds on " + c.name);
  }
}

}  // namespace bebplan
