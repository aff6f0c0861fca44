#include "bebplan/tco_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bebplan/error.hpp"

namespace bebplan {

InitialPurchases initial_purchases(const ScenarioConfig& config, const std::vector<BusType>& types) {
  InitialPurchases out(types.size());
  if (config.initial_fleet.empty()) return out;
  const std::size_t k0 = initial_fleet_class(types);
  for (const auto& e : config.initial_fleet) {
    if (e.count > 0) out[k0][1 - e.age_years] += e.count;
  }
  return out;
}

namespace {

std::string tag(const char* prefix, std::initializer_list<std::pair<char, std::size_t>> idx) {
  std::string s = prefix;
  for (auto [c, v] : idx) {
    s += '_';
    s += c;
    s += std::to_string(v);
  }
  return s;
}

// Linearly depreciated resale value of a bus of type k after `age` years.
double resale(const ScenarioConfig& cfg, const BusType& k, double age) {
  const double v = cfg.salvage_value();
  return (k.purchase_cost - v) * (1.0 - age / cfg.bus_lifetime_years) + v;
}

class Builder {
 public:
  Builder(const Network& network, const VehicleSchedule& schedule, const ScenarioConfig& config)
      : net_(network), sched_(schedule), cfg_(config) {}

  TransformationModel run() {
    if (cfg_.horizon_years <= 0) throw Error(ErrorCode::NoPeriods, "horizon_years must be at least 1");
    if (sched_.sequences.empty()) throw Error(ErrorCode::EmptySchedule, "schedule has no sequences");
    const auto violations = validate_schedule(sched_, net_);
    if (!violations.empty()) {
      throw Error(ErrorCode::InvalidInput, "schedule is not valid: " + violations.front().detail);
    }
    cfg_.validate();

    auto& cat = model_.catalog;
    cat.periods = cfg_.horizon_years;
    cat.types = build_catalog(cfg_);
    if (cat.types.empty()) throw Error(ErrorCode::NoPurchasableTypes, to_string(cfg_.scenario));
    cat.stations = net_.candidate_stations();
    for (const auto& s : sched_.sequences) {
      cat.sequence_ids.push_back(s.sequence_id);
      cat.trip_counts.push_back(s.ordered_trips.size());
      model_.profiles.push_back(make_profile(s, net_));
    }
    model_.mip.name = "bebplan_" + to_string(cfg_.scenario);
    init_ = initial_purchases(cfg_, cat.types);
    compute_big_m();
    add_columns();
    add_fleet_rows();
    add_infrastructure_rows();
    add_assignment_rows();
    add_energy_rows();
    if (cfg_.depot_coupling_mode == DepotCouplingMode::PerBeb) add_depot_coupling();
    model_.mip.objective_constant = initial_fleet_constant();
    cat.column_count = model_.mip.columns.size();
    model_.mip.check();
    return std::move(model_);
  }

 private:
  double discount(int t) const { return std::pow(1.0 + cfg_.discount_rate, -t); }
  int n() const { return cfg_.horizon_years; }
  std::size_t seq_count() const { return sched_.sequences.size(); }

  void compute_big_m() {
    double worst = 0.0;
    for (const auto& p : model_.profiles) {
      worst = std::max(worst, p.consumption(cfg_.beb.consumption_kwh_per_km, cfg_.beb_empty_consumption()));
    }
    double q_max = 0.0;
    for (double q : cfg_.beb.capacities_kwh) q_max = std::max(q_max, q);
    model_.big_m = worst / cfg_.usable_soc_fraction + cfg_.usable_soc_fraction * q_max;
  }

  int initial_stock(std::size_t k) const {
    int sum = 0;
    for (auto [tau, c] : init_[k]) sum += c;
    return sum;
  }

  int initial_purchase_at(std::size_t k, int tau) const {
    auto it = init_[k].find(tau);
    return it == init_[k].end() ? 0 : it->second;
  }

  double purchase_coefficient(const BusType& k, int t) const {
    const int h = k.holding_period_years;
    const int eq = cfg_.battery_lifetime_years;
    const int end = n() + 1;
    double c = discount(t) * k.purchase_cost;
    if (k.is_beb()) {
      const double q = k.battery_capacity_kwh;
      c += discount(t) * battery_price(cfg_, k, t) * q;
      if (t + eq <= n()) c += discount(t + eq) * battery_price(cfg_, k, t + eq) * q;
      // Battery salvage: the original battery and its replacement, each when
      // bought inside the final e^q years.
      if (t >= end - eq) c -= discount(end) * battery_price(cfg_, k, t) * q * (1.0 - double(end - t) / eq);
      const int t2 = t + eq;
      if (t2 <= n() && t2 >= end - eq) {
        c -= discount(end) * battery_price(cfg_, k, t2) * q * (1.0 - double(end - t2) / eq);
      }
    }
    if (t + h <= n()) c -= discount(t + h) * resale(cfg_, k, h);
    if (t >= end - h) c -= discount(end) * resale(cfg_, k, end - t);
    return c;
  }

  double operating_coefficient(const SequenceProfile& prof, const BusType& k, int t) const {
    const double l = prof.service_km();
    const double d = prof.deadhead_km();
    const double per_day =
        k.maintenance_cost_per_km * (l + d) + k.energy_price_per_unit * (k.consumption_loaded * l + k.consumption_empty * d);
    return discount(t) * cfg_.annual_operating_days * per_day;
  }

  // Installing in t and keeping the facility: install cost once, maintenance
  // every period. Expressed on the cumulative variable via c(z_t - z_{t-1}).
  double facility_coefficient(double install, double maintain, int t) const {
    double c = discount(t) * (install + maintain);
    if (t < n()) c -= discount(t + 1) * install;
    return c;
  }

  void add_columns() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    const std::size_t K = cat.types.size();
    const std::size_t S = seq_count();
    const double s_cap = static_cast<double>(S);

    cat.n.assign(K, {});
    cat.p.assign(K, {});
    double beb_stock_cap = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double n_cap = initial_stock(k) + s_cap * n();
      if (cat.types[k].is_beb()) beb_stock_cap += n_cap;
      for (int t = 1; t <= n(); ++t) {
        cat.n[k].push_back(mip.add_column({tag("n", {{'k', k}, {'t', t}}), 0.0, n_cap, true, 0.0}));
      }
      for (int t = 1; t <= n(); ++t) {
        cat.p[k].push_back(
            mip.add_column({tag("p", {{'k', k}, {'t', t}}), 0.0, s_cap, true, purchase_coefficient(cat.types[k], t)}));
      }
    }
    const double a_cap = cfg_.depot_coupling_mode == DepotCouplingMode::PerBeb ? beb_stock_cap : s_cap;
    for (int t = 1; t <= n(); ++t) {
      const double c = facility_coefficient(cfg_.ncf_cost, cfg_.ncf_maintenance_cost(), t);
      cat.a.push_back(mip.add_column({tag("a", {{'t', t}}), 0.0, a_cap, true, c}));
    }
    cat.y.assign(cat.stations.size(), {});
    for (std::size_t i = 0; i < cat.stations.size(); ++i) {
      for (int t = 1; t <= n(); ++t) {
        const double c = facility_coefficient(cfg_.ocf_cost(), cfg_.ocf_maintenance_cost(), t);
        cat.y[i].push_back(mip.add_column({tag("y", {{'i', i}, {'t', t}}), 0.0, 1.0, true, c}));
      }
    }

    std::set<std::string> all_stations(cat.stations.begin(), cat.stations.end());
    cat.x.assign(S, std::vector<std::vector<std::size_t>>(K));
    for (std::size_t s = 0; s < S; ++s) {
      const auto& prof = model_.profiles[s];
      for (std::size_t k = 0; k < K; ++k) {
        const BusType& type = cat.types[k];
        // Pairs that cannot work even with every candidate station equipped.
        bool possible = true;
        if (type.kind == BusKind::Ncb) possible = ncb_feasible(prof, type, cfg_);
        if (type.kind == BusKind::Ocb) {
          possible = simulate_sequence(prof, type, all_stations, cfg_.charging_power_kw, cfg_).feasible;
        }
        for (int t = 1; t <= n(); ++t) {
          cat.x[s][k].push_back(mip.add_column({tag("x", {{'s', s}, {'k', k}, {'t', t}}), 0.0, possible ? 1.0 : 0.0,
                                                true, operating_coefficient(prof, type, t)}));
        }
      }
    }

    const double m = model_.big_m;
    cat.theta.assign(S, {});
    cat.q.assign(S, {});
    cat.w.assign(S, {});
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t trips = cat.trip_counts[s];
      for (int t = 1; t <= n(); ++t) {
        cat.theta[s].push_back(mip.add_column({tag("theta", {{'s', s}, {'t', t}}), 0.0, m, false, 0.0}));
      }
      cat.q[s].assign(trips + 1, {});
      cat.w[s].assign(trips, {});
      for (std::size_t pos = 0; pos <= trips; ++pos) {
        for (int t = 1; t <= n(); ++t) {
          cat.q[s][pos].push_back(mip.add_column({tag("q", {{'s', s}, {'p', pos}, {'t', t}}), 0.0, m, false, 0.0}));
        }
      }
      for (std::size_t pos = 0; pos < trips; ++pos) {
        for (int t = 1; t <= n(); ++t) {
          cat.w[s][pos].push_back(mip.add_column({tag("w", {{'s', s}, {'p', pos}, {'t', t}}), 0.0, m, false, 0.0}));
        }
      }
    }
  }

  std::size_t row(RowFamily f, std::initializer_list<std::pair<char, std::size_t>> idx, Sense sense, double rhs) {
    const std::string prefix = to_string(f);
    return model_.mip.add_row({tag(prefix.c_str(), idx), sense, rhs, f});
  }

  void add_fleet_rows() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    for (std::size_t k = 0; k < cat.types.size(); ++k) {
      const int h = cat.types[k].holding_period_years;
      for (int t = 1; t <= n(); ++t) {
        double rhs = 0.0;
        if (t == 1) rhs += initial_stock(k);
        if (t - h <= 0) rhs -= initial_purchase_at(k, t - h);
        const auto r = row(RowFamily::StockBalance, {{'k', k}, {'t', t}}, Sense::Equal, rhs);
        mip.add_coefficient(r, cat.n[k][t - 1], 1.0);
        if (t > 1) mip.add_coefficient(r, cat.n[k][t - 2], -1.0);
        mip.add_coefficient(r, cat.p[k][t - 1], -1.0);
        if (t - h >= 1) mip.add_coefficient(r, cat.p[k][t - h - 1], 1.0);
      }
    }
  }

  void add_infrastructure_rows() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    // t = 1 compares against the empty initial state and reduces to a bound.
    for (int t = 2; t <= n(); ++t) {
      const auto r = row(RowFamily::DepotMonotone, {{'t', t}}, Sense::GreaterEqual, 0.0);
      mip.add_coefficient(r, cat.a[t - 1], 1.0);
      mip.add_coefficient(r, cat.a[t - 2], -1.0);
    }
    for (std::size_t i = 0; i < cat.stations.size(); ++i) {
      for (int t = 2; t <= n(); ++t) {
        const auto r = row(RowFamily::OcfMonotone, {{'i', i}, {'t', t}}, Sense::GreaterEqual, 0.0);
        mip.add_coefficient(r, cat.y[i][t - 1], 1.0);
        mip.add_coefficient(r, cat.y[i][t - 2], -1.0);
      }
    }
  }

  void add_assignment_rows() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    const std::size_t K = cat.types.size();
    for (std::size_t s = 0; s < seq_count(); ++s) {
      for (int t = 1; t <= n(); ++t) {
        const auto r = row(RowFamily::Assignment, {{'s', s}, {'t', t}}, Sense::Equal, 1.0);
        for (std::size_t k = 0; k < K; ++k) mip.add_coefficient(r, cat.x[s][k][t - 1], 1.0);
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      for (int t = 1; t <= n(); ++t) {
        const auto r = row(RowFamily::FleetCover, {{'k', k}, {'t', t}}, Sense::GreaterEqual, 0.0);
        mip.add_coefficient(r, cat.n[k][t - 1], 1.0);
        for (std::size_t s = 0; s < seq_count(); ++s) mip.add_coefficient(r, cat.x[s][k][t - 1], -1.0);
      }
    }
  }

  void add_energy_rows() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    const double mu = cfg_.usable_soc_fraction;
    const double m = model_.big_m;
    const double r_kw = cfg_.charging_power_kw;
    for (std::size_t s = 0; s < seq_count(); ++s) {
      const auto& prof = model_.profiles[s];
      for (std::size_t k = 0; k < cat.types.size(); ++k) {
        const BusType& type = cat.types[k];
        const double cap = mu * type.battery_capacity_kwh;
        if (type.kind == BusKind::Ncb) {
          const double need = prof.consumption(type.consumption_loaded, type.consumption_empty);
          for (int t = 1; t <= n(); ++t) {
            const auto r = row(RowFamily::NcbRange, {{'s', s}, {'k', k}, {'t', t}}, Sense::LessEqual, cap);
            mip.add_coefficient(r, cat.x[s][k][t - 1], need);
          }
        } else if (type.kind == BusKind::Ocb) {
          for (int t = 1; t <= n(); ++t) {
            const auto r = row(RowFamily::CapacityLink, {{'s', s}, {'k', k}, {'t', t}}, Sense::LessEqual, cap + m);
            mip.add_coefficient(r, cat.theta[s][t - 1], 1.0);
            mip.add_coefficient(r, cat.x[s][k][t - 1], m);
          }
        }
      }

      // The SOC chain uses the BEB consumption rates of the configuration.
      const double lo = cfg_.beb.consumption_kwh_per_km;
      const double le = cfg_.beb_empty_consumption();
      const std::size_t trips = cat.trip_counts[s];
      for (int t = 1; t <= n(); ++t) {
        const std::size_t ti = t - 1;
        const auto r0 = row(RowFamily::InitialSoc, {{'s', s}, {'t', t}}, Sense::LessEqual, -prof.pull_out_km * le);
        mip.add_coefficient(r0, cat.q[s][0][ti], 1.0);
        mip.add_coefficient(r0, cat.theta[s][ti], -1.0);
        for (std::size_t pos = 0; pos < trips; ++pos) {
          const auto& stop = prof.stops[pos];
          const double used = stop.service_km * lo + stop.deadhead_after_km * le;
          const auto rf = row(RowFamily::SocBalance, {{'s', s}, {'p', pos}, {'t', t}}, Sense::LessEqual, -used);
          mip.add_coefficient(rf, cat.q[s][pos + 1][ti], 1.0);
          mip.add_coefficient(rf, cat.q[s][pos][ti], -1.0);
          mip.add_coefficient(rf, cat.w[s][pos][ti], -1.0);

          const auto rc = row(RowFamily::ChargeTime, {{'s', s}, {'p', pos}, {'t', t}}, Sense::LessEqual, 0.0);
          mip.add_coefficient(rc, cat.w[s][pos][ti], 1.0);
          if (auto i = net_.candidate_index(stop.start_station)) {
            mip.add_coefficient(rc, cat.y[*i][ti], -r_kw * stop.dwell_h);
          }

          const auto rh = row(RowFamily::ChargeHeadroom, {{'s', s}, {'p', pos}, {'t', t}}, Sense::LessEqual, 0.0);
          mip.add_coefficient(rh, cat.w[s][pos][ti], 1.0);
          mip.add_coefficient(rh, cat.q[s][pos][ti], 1.0);
          mip.add_coefficient(rh, cat.theta[s][ti], -1.0);
        }
      }
    }
  }

  void add_depot_coupling() {
    auto& cat = model_.catalog;
    auto& mip = model_.mip;
    for (int t = 1; t <= n(); ++t) {
      const auto r = row(RowFamily::DepotCoupling, {{'t', t}}, Sense::GreaterEqual, 0.0);
      mip.add_coefficient(r, cat.a[t - 1], 1.0);
      for (std::size_t k = 0; k < cat.types.size(); ++k) {
        if (cat.types[k].is_beb()) mip.add_coefficient(r, cat.n[k][t - 1], -1.0);
      }
    }
    model_.has_depot_coupling = true;
  }

  // Value of the initial fleet, minus the revenue from selling it on schedule
  // and its residual value if still held after the horizon.
  double initial_fleet_constant() const {
    const auto& types = model_.catalog.types;
    const int end = n() + 1;
    double c = 0.0;
    for (std::size_t k = 0; k < types.size(); ++k) {
      const int h = types[k].holding_period_years;
      for (auto [tau, count] : init_[k]) {
        c += count * resale(cfg_, types[k], 1 - tau);
        if (tau + h <= n()) c -= count * discount(tau + h) * resale(cfg_, types[k], h);
        else c -= count * discount(end) * resale(cfg_, types[k], end - tau);
      }
    }
    return c;
  }

  const Network& net_;
  const VehicleSchedule& sched_;
  const ScenarioConfig& cfg_;
  InitialPurchases init_;
  TransformationModel model_;
};

}  // namespace

TransformationModel build_mip(const Network& network, const VehicleSchedule& schedule, const ScenarioConfig& config) {
  return Builder(network, schedule, config).run();
}

}  // namespace bebplan

namespace bebplan {

std::vector<double> rounding_start(const TransformationModel& model, const ScenarioConfig& config) {
  const auto& cat = model.catalog;
  const auto& mip = model.mip;
  const InitialPurchases init = initial_purchases(config, cat.types);
  const int n = cat.periods;
  const double need = static_cast<double>(cat.sequence_ids.size());

  std::vector<double> best;
  double best_cost = kInfinity;
  for (std::size_t k = 0; k < cat.types.size(); ++k) {
    if (cat.types[k].kind != BusKind::Iceb) continue;
    std::vector<double> x(mip.columns.size(), 0.0);
    // Stock of every type: the initial fleet ages out on schedule.
    for (std::size_t kk = 0; kk < cat.types.size(); ++kk) {
      const int hk = cat.types[kk].holding_period_years;
      double stock = 0.0;
      for (auto [tau, c] : init[kk]) stock += c;
      for (int t = 1; t <= n; ++t) {
        double sold = 0.0;
        if (t - hk <= 0) {
          auto it = init[kk].find(t - hk);
          if (it != init[kk].end()) sold = it->second;
        } else {
          sold = x[cat.p[kk][t - hk - 1]];
        }
        stock -= sold;
        if (kk == k && stock < need) {
          x[cat.p[kk][t - 1]] = need - stock;
          stock = need;
        }
        x[cat.n[kk][t - 1]] = stock;
      }
    }
    for (std::size_t s = 0; s < cat.sequence_ids.size(); ++s) {
      const auto& prof = model.profiles[s];
      const double le = config.beb_empty_consumption();
      const double lo = config.beb.consumption_kwh_per_km;
      for (int t = 1; t <= n; ++t) {
        x[cat.x[s][k][t - 1]] = 1.0;
        const double theta = model.big_m;
        x[cat.theta[s][t - 1]] = theta;
        double soc = theta - prof.pull_out_km * le;
        x[cat.q[s][0][t - 1]] = soc;
        for (std::size_t pos = 0; pos < prof.stops.size(); ++pos) {
          soc -= prof.stops[pos].service_km * lo + prof.stops[pos].deadhead_after_km * le;
          x[cat.q[s][pos + 1][t - 1]] = soc;
        }
      }
    }
    const double z = mip.objective_value(x);
    if (z < best_cost) {
      best_cost = z;
      best = std::move(x);
    }
  }
  return best;
}

}  // namespace bebplan
