#include "bebplan/plan.hpp"

#include <cmath>

#include "bebplan/energy.hpp"
#include "bebplan/error.hpp"

namespace bebplan {

int TransformationPlan::assigned_type(std::size_t s, int t) const {
  int best = -1;
  double best_value = 0.5;
  for (std::size_t k = 0; k < x[s].size(); ++k) {
    if (x[s][k][t - 1] > best_value) {
      best_value = x[s][k][t - 1];
      best = static_cast<int>(k);
    }
  }
  return best;
}

std::vector<std::string> TransformationPlan::equipped_stations(int t) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (y[i][t - 1] > 0.5) out.push_back(stations[i]);
  }
  return out;
}

namespace {

template <class Fn>
void for_each_slot(const VariableCatalog& c, Fn&& fn) {
  for (std::size_t k = 0; k < c.types.size(); ++k) {
    for (int t = 0; t < c.periods; ++t) {
      fn(c.n[k][t], [k, t](auto& pl) -> auto& { return pl.n[k][t]; });
      fn(c.p[k][t], [k, t](auto& pl) -> auto& { return pl.p[k][t]; });
    }
  }
  for (int t = 0; t < c.periods; ++t) fn(c.a[t], [t](auto& pl) -> auto& { return pl.a[t]; });
  for (std::size_t i = 0; i < c.stations.size(); ++i) {
    for (int t = 0; t < c.periods; ++t) {
      fn(c.y[i][t], [i, t](auto& pl) -> auto& { return pl.y[i][t]; });
    }
  }
  for (std::size_t s = 0; s < c.sequence_ids.size(); ++s) {
    for (std::size_t k = 0; k < c.types.size(); ++k) {
      for (int t = 0; t < c.periods; ++t) {
        fn(c.x[s][k][t], [s, k, t](auto& pl) -> auto& { return pl.x[s][k][t]; });
      }
    }
    for (int t = 0; t < c.periods; ++t) {
      fn(c.theta[s][t], [s, t](auto& pl) -> auto& { return pl.theta[s][t]; });
    }
    for (std::size_t pos = 0; pos < c.q[s].size(); ++pos) {
      for (int t = 0; t < c.periods; ++t) {
        fn(c.q[s][pos][t], [s, pos, t](auto& pl) -> auto& { return pl.q[s][pos][t]; });
      }
    }
    for (std::size_t pos = 0; pos < c.w[s].size(); ++pos) {
      for (int t = 0; t < c.periods; ++t) {
        fn(c.w[s][pos][t], [s, pos, t](auto& pl) -> auto& { return pl.w[s][pos][t]; });
      }
    }
  }
}

void require_shape(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, what);
}

void check_shape(const TransformationPlan& pl, std::size_t types, std::size_t stations,
                 const std::vector<std::size_t>& trip_counts) {
  const auto T = static_cast<std::size_t>(pl.periods);
  require_shape(pl.periods > 0, "plan has no periods");
  require_shape(pl.n.size() == types && pl.p.size() == types, "fleet arrays do not match the type count");
  for (std::size_t k = 0; k < types; ++k) {
    require_shape(pl.n[k].size() == T && pl.p[k].size() == T, "fleet arrays do not match the horizon");
  }
  require_shape(pl.a.size() == T, "depot charger array does not match the horizon");
  require_shape(pl.y.size() == stations, "station charger array does not match the candidate stations");
  for (const auto& row : pl.y) require_shape(row.size() == T, "station charger array does not match the horizon");
  const std::size_t S = trip_counts.size();
  require_shape(pl.x.size() == S && pl.theta.size() == S && pl.q.size() == S && pl.w.size() == S,
                "sequence arrays do not match the schedule");
  for (std::size_t s = 0; s < S; ++s) {
    require_shape(pl.x[s].size() == types, "assignment array does not match the type count");
    for (const auto& v : pl.x[s]) require_shape(v.size() == T, "assignment array does not match the horizon");
    require_shape(pl.theta[s].size() == T, "theta array does not match the horizon");
    require_shape(pl.q[s].size() == trip_counts[s] + 1 && pl.w[s].size() == trip_counts[s],
                  "SOC arrays do not match the trip count of sequence " + std::to_string(s));
    for (const auto& v : pl.q[s]) require_shape(v.size() == T, "SOC array does not match the horizon");
    for (const auto& v : pl.w[s]) require_shape(v.size() == T, "recharge array does not match the horizon");
  }
}

}  // namespace

TransformationPlan empty_plan(const VariableCatalog& c) {
  TransformationPlan pl;
  pl.periods = c.periods;
  for (const auto& t : c.types) pl.type_ids.push_back(t.id);
  pl.stations = c.stations;
  pl.sequence_ids = c.sequence_ids;
  const auto T = static_cast<std::size_t>(c.periods);
  const std::size_t K = c.types.size();
  const std::size_t S = c.sequence_ids.size();
  pl.n.assign(K, std::vector<double>(T, 0.0));
  pl.p = pl.n;
  pl.a.assign(T, 0.0);
  pl.y.assign(c.stations.size(), std::vector<double>(T, 0.0));
  pl.x.assign(S, std::vector<std::vector<double>>(K, std::vector<double>(T, 0.0)));
  pl.theta.assign(S, std::vector<double>(T, 0.0));
  pl.q.resize(S);
  pl.w.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    pl.q[s].assign(c.trip_counts[s] + 1, std::vector<double>(T, 0.0));
    pl.w[s].assign(c.trip_counts[s], std::vector<double>(T, 0.0));
  }
  return pl;
}

TransformationPlan decode_plan(const VariableCatalog& catalog, const std::vector<double>& values) {
  require_shape(values.size() == catalog.column_count, "value vector does not match the column count");
  TransformationPlan pl = empty_plan(catalog);
  for_each_slot(catalog, [&](std::size_t col, auto ref) { ref(pl) = values[col]; });
  return pl;
}

std::vector<double> encode_plan(const VariableCatalog& catalog, const TransformationPlan& plan) {
  check_shape(plan, catalog.types.size(), catalog.stations.size(), catalog.trip_counts);
  require_shape(plan.periods == catalog.periods, "plan horizon differs from the model");
  std::vector<double> values(catalog.column_count, 0.0);
  for_each_slot(catalog, [&](std::size_t col, auto ref) { values[col] = ref(plan); });
  return values;
}

CostReport price_plan(const TransformationPlan& plan, const Network& network, const VehicleSchedule& schedule,
                      const ScenarioConfig& config) {
  const std::vector<BusType> types = build_catalog(config);
  std::vector<std::size_t> trip_counts;
  for (const auto& s : schedule.sequences) trip_counts.push_back(s.ordered_trips.size());
  require_shape(plan.periods == config.horizon_years, "plan horizon differs from the configuration");
  require_shape(plan.type_ids.size() == types.size(), "plan type list differs from the scenario catalog");
  for (std::size_t k = 0; k < types.size(); ++k) {
    require_shape(plan.type_ids[k] == types[k].id, "plan type " + plan.type_ids[k] + " is not " + types[k].id);
  }
  check_shape(plan, types.size(), network.candidate_stations().size(), trip_counts);

  const int n = plan.periods;
  const int eq = config.battery_lifetime_years;
  const double v = config.salvage_value();
  const auto init = initial_purchases(config, types);
  auto resale = [&](const BusType& k, double age) {
    return (k.purchase_cost - v) * (1.0 - age / config.bus_lifetime_years) + v;
  };
  // Purchases including the synthetic pre-horizon ones of the initial fleet.
  auto bought = [&](std::size_t k, int t) -> double {
    if (t >= 1) return t <= n ? plan.p[k][t - 1] : 0.0;
    auto it = init[k].find(t);
    return it == init[k].end() ? 0.0 : it->second;
  };
  auto df = [&](int t) { return std::pow(1.0 + config.discount_rate, -t); };

  CostReport r;
  const auto T = static_cast<std::size_t>(n);
  r.bus_purchase.assign(T, 0.0);
  r.battery_purchase.assign(T, 0.0);
  r.bus_sold.assign(T, 0.0);
  r.infra_install.assign(T, 0.0);
  r.infra_maintenance.assign(T, 0.0);
  r.oper_maintenance.assign(T, 0.0);
  r.oper_energy.assign(T, 0.0);

  for (const auto& e : config.initial_fleet) {
    r.fleet_initial += e.count * resale(types[initial_fleet_class(types)], e.age_years);
  }

  std::vector<double> service, deadhead;
  for (const auto& s : schedule.sequences) {
    const SequenceProfile prof = make_profile(s, network);
    service.push_back(prof.service_km());
    deadhead.push_back(prof.deadhead_km());
  }

  const double c_ocf = config.ocf_cost();
  for (int t = 1; t <= n; ++t) {
    const std::size_t ti = t - 1;
    for (std::size_t k = 0; k < types.size(); ++k) {
      const BusType& type = types[k];
      r.bus_purchase[ti] += type.purchase_cost * bought(k, t);
      if (type.is_beb()) {
        r.battery_purchase[ti] +=
            battery_price(config, type, t) * type.battery_capacity_kwh * (bought(k, t) + bought(k, t - eq));
      }
      r.bus_sold[ti] += resale(type, type.holding_period_years) * bought(k, t - type.holding_period_years);
    }
    for (std::size_t i = 0; i < plan.y.size(); ++i) {
      const double prev = t > 1 ? plan.y[i][ti - 1] : 0.0;
      r.infra_install[ti] += c_ocf * (plan.y[i][ti] - prev);
      r.infra_maintenance[ti] += config.ocf_maintenance_cost() * plan.y[i][ti];
    }
    const double prev_a = t > 1 ? plan.a[ti - 1] : 0.0;
    r.infra_install[ti] += config.ncf_cost * (plan.a[ti] - prev_a);
    r.infra_maintenance[ti] += config.ncf_maintenance_cost() * plan.a[ti];
    for (std::size_t s = 0; s < schedule.sequences.size(); ++s) {
      for (std::size_t k = 0; k < types.size(); ++k) {
        const double xv = plan.x[s][k][ti];
        if (xv == 0.0) continue;
        const BusType& type = types[k];
        r.oper_maintenance[ti] +=
            config.annual_operating_days * type.maintenance_cost_per_km * (service[s] + deadhead[s]) * xv;
        r.oper_energy[ti] += config.annual_operating_days * type.energy_price_per_unit *
                             (type.consumption_loaded * service[s] + type.consumption_empty * deadhead[s]) * xv;
      }
    }
  }

  const int end = n + 1;
  for (std::size_t k = 0; k < types.size(); ++k) {
    const BusType& type = types[k];
    // Buses bought at tau and still held after the horizon; this includes the
    // initial fleet when its holding period reaches past t_n.
    const int first = std::min(1, init[k].empty() ? 1 : init[k].begin()->first);
    for (int tau = first; tau <= n; ++tau) {
      if (tau >= end - type.holding_period_years) r.bus_salvage += resale(type, end - tau) * bought(k, tau);
    }
    if (type.is_beb()) {
      for (int t = std::max(1, end - eq); t <= n; ++t) {
        r.battery_salvage += battery_price(config, type, t) * type.battery_capacity_kwh *
                             (1.0 - double(end - t) / eq) * (bought(k, t) + bought(k, t - eq));
      }
    }
  }

  for (int t = 1; t <= n; ++t) {
    const std::size_t ti = t - 1;
    r.fleet_total += df(t) * (r.bus_purchase[ti] + r.battery_purchase[ti] - r.bus_sold[ti]);
    r.infra_total += df(t) * (r.infra_install[ti] + r.infra_maintenance[ti]);
    r.oper_total += df(t) * (r.oper_maintenance[ti] + r.oper_energy[ti]);
  }
  r.tco = r.fleet_initial + r.fleet_total + r.infra_total + r.oper_total -
          df(end) * (r.bus_salvage + r.battery_salvage);
  return r;
}

std::vector<RowViolation> validate_plan(const std::vector<double>& values, const SparseMip& mip) {
  require_shape(values.size() == mip.columns.size(), "value vector does not match the column count");
  std::vector<RowViolation> out;
  const double tol = kPlanFeasibilityTolerance;
  for (std::size_t j = 0; j < mip.columns.size(); ++j) {
    const Column& c = mip.columns[j];
    const double xv = values[j];
    if (xv < c.lower - tol || xv > c.upper + tol) {
      out.push_back({"bound:" + c.name, RowFamily::Custom, xv, xv < c.lower ? c.lower : c.upper});
    }
    if (c.is_integer && std::abs(xv - std::round(xv)) > tol) {
      out.push_back({"integrality:" + c.name, RowFamily::Custom, xv, std::round(xv)});
    }
  }
  const auto act = mip.row_activities(values);
  for (std::size_t i = 0; i < mip.rows.size(); ++i) {
    const Row& r = mip.rows[i];
    bool bad = false;
    switch (r.sense) {
      case Sense::LessEqual: bad = act[i] > r.rhs + tol; break;
      case Sense::GreaterEqual: bad = act[i] < r.rhs - tol; break;
      case Sense::Equal: bad = std::abs(act[i] - r.rhs) > tol; break;
    }
    if (bad) out.push_back({r.name, r.family, act[i], r.rhs});
  }
  return out;
}

std::vector<RowViolation> validate_plan(const TransformationPlan& plan, const TransformationModel& model) {
  return validate_plan(encode_plan(model.catalog, plan), model.mip);
}

nlohmann::json plan_to_json(const TransformationPlan& plan, const CostReport* costs) {
  nlohmann::json j;
  j["periods"] = plan.periods;
  j["types"] = plan.type_ids;
  j["stations"] = plan.stations;
  j["sequence_ids"] = plan.sequence_ids;
  j["n"] = plan.n;
  j["p"] = plan.p;
  j["a"] = plan.a;
  j["y"] = plan.y;
  j["x"] = plan.x;
  j["theta"] = plan.theta;
  j["q"] = plan.q;
  j["w"] = plan.w;
  if (costs) {
    j["costs"] = {
        {"fleet_initial", costs->fleet_initial},
        {"bus_purchase", costs->bus_purchase},
        {"battery_purchase", costs->battery_purchase},
        {"bus_sold", costs->bus_sold},
        {"infra_install", costs->infra_install},
        {"infra_maintenance", costs->infra_maintenance},
        {"oper_maintenance", costs->oper_maintenance},
        {"oper_energy", costs->oper_energy},
        {"bus_salvage", costs->bus_salvage},
        {"battery_salvage", costs->battery_salvage},
        {"fleet_total", costs->fleet_total},
        {"infra_total", costs->infra_total},
        {"oper_total", costs->oper_total},
        {"tco", costs->tco},
    };
  }
  return j;
}

TransformationPlan plan_from_json(const nlohmann::json& j) {
  try {
    TransformationPlan pl;
    pl.periods = j.at("periods").get<int>();
    pl.type_ids = j.at("types").get<std::vector<std::string>>();
    pl.stations = j.at("stations").get<std::vector<std::string>>();
    pl.sequence_ids = j.at("sequence_ids").get<std::vector<int>>();
    j.at("n").get_to(pl.n);
    j.at("p").get_to(pl.p);
    j.at("a").get_to(pl.a);
    j.at("y").get_to(pl.y);
    j.at("x").get_to(pl.x);
    j.at("theta").get_to(pl.theta);
    j.at("q").get_to(pl.q);
    j.at("w").get_to(pl.w);
    return pl;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("plan JSON: ") + e.what());
  }
}

}  // namespace bebplan
