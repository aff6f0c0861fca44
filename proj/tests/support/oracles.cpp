#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "bebplan/plan.hpp"

namespace oracle {

using namespace bebplan;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int min_fleet_by_partition(const Network& network) {
  const auto& trips = network.trips();
  const std::size_t n = trips.size();
  if (n > 10) throw std::invalid_argument("partition oracle is limited to 10 trips");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return trips[a].depart_min < trips[b].depart_min; });

  auto follows = [&](std::size_t i, std::size_t j) {
    return trips[i].end_min + network.between(trips[i], trips[j]).time_min < trips[j].depart_min;
  };
  // Restricted-growth enumeration of set partitions; a trip may join a block
  // only when it can follow the block's last trip in departure order.
  std::vector<std::size_t> last;
  int best = static_cast<int>(n);
  std::function<void(std::size_t)> place = [&](std::size_t pos) {
    if (static_cast<int>(last.size()) >= best) return;
    if (pos == n) {
      best = static_cast<int>(last.size());
      return;
    }
    const std::size_t trip = order[pos];
    for (std::size_t b = 0; b < last.size(); ++b) {
      if (!follows(last[b], trip)) continue;
      const std::size_t prev = last[b];
      last[b] = trip;
      place(pos + 1);
      last[b] = prev;
    }
    last.push_back(trip);
    place(pos + 1);
    last.pop_back();
  };
  place(0);
  return best;
}

bool charging_feasible_by_search(const SequenceProfile& profile, const BusType& bus,
                                 const std::set<std::string>& equipped, double power_kw,
                                 const ScenarioConfig& config, double step) {
  const double cap = config.usable_soc_fraction * bus.battery_capacity_kwh;
  const double tol = 1e-9;
  std::function<bool(std::size_t, double)> go = [&](std::size_t p, double soc) {
    if (soc < -tol) return false;
    if (p == profile.stops.size()) return true;
    const auto& stop = profile.stops[p];
    double limit = 0.0;
    if (stop.dwell_h > 0.0 && equipped.count(stop.start_station)) {
      limit = std::min(power_kw * stop.dwell_h, cap - soc);
    }
    const double use = stop.service_km * bus.consumption_loaded + stop.deadhead_after_km * bus.consumption_empty;
    const auto steps = static_cast<long>(std::floor(limit / step + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      if (go(p + 1, soc + static_cast<double>(k) * step - use)) return true;
    }
    return false;
  };
  return go(0, cap - profile.pull_out_km * bus.consumption_empty);
}

namespace {

TransformationPlan shell(const Network& network, const VehicleSchedule& schedule, const ScenarioConfig& config,
                         const std::vector<BusType>& types) {
  TransformationPlan pl;
  const auto T = static_cast<std::size_t>(config.horizon_years);
  pl.periods = config.horizon_years;
  for (const auto& t : types) pl.type_ids.push_back(t.id);
  pl.stations = network.candidate_stations();
  for (const auto& s : schedule.sequences) pl.sequence_ids.push_back(s.sequence_id);
  pl.n.assign(types.size(), std::vector<double>(T, 0.0));
  pl.p = pl.n;
  pl.a.assign(T, 0.0);
  pl.y.assign(pl.stations.size(), std::vector<double>(T, 0.0));
  for (const auto& s : schedule.sequences) {
    pl.x.emplace_back(types.size(), std::vector<double>(T, 0.0));
    pl.theta.emplace_back(T, 0.0);
    pl.q.emplace_back(s.ordered_trips.size() + 1, std::vector<double>(T, 0.0));
    pl.w.emplace_back(s.ordered_trips.size(), std::vector<double>(T, 0.0));
  }
  return pl;
}

}  // namespace

Optimum enumerate_optimum(const Network& network, const VehicleSchedule& schedule, const ScenarioConfig& config) {
  if (config.depot_coupling_mode != DepotCouplingMode::None) {
    throw std::invalid_argument("enumeration oracle covers the uncoupled depot mode only");
  }
  const std::vector<BusType> types = build_catalog(config);
  const int n = config.horizon_years;
  const std::size_t K = types.size();
  const std::size_t S = schedule.sequences.size();
  const auto& stations = network.candidate_stations();
  const std::size_t R = stations.size();
  const int cap = static_cast<int>(S);

  // Unit costs by probing the pricing routine one decision at a time.
  TransformationPlan plan = shell(network, schedule, config, types);
  const double base = price_plan(plan, network, schedule, config).tco;
  auto probe = [&](double& slot) {
    slot = 1.0;
    const double c = price_plan(plan, network, schedule, config).tco - base;
    slot = 0.0;
    return c;
  };
  std::vector<std::vector<double>> cp(K, std::vector<double>(n));
  std::vector<std::vector<std::vector<double>>> cx(S, cp);
  std::vector<std::vector<double>> cy(R, std::vector<double>(n));
  std::vector<double> ca(n);
  for (int t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      cp[k][t] = probe(plan.p[k][t]);
      for (std::size_t s = 0; s < S; ++s) cx[s][k][t] = probe(plan.x[s][k][t]);
    }
    for (std::size_t i = 0; i < R; ++i) cy[i][t] = probe(plan.y[i][t]);
    ca[t] = probe(plan.a[t]);
  }

  // Categories: 0 pools every ICEB class (identical operating costs), then
  // one per BEB type. Purchase groups follow the same split.
  std::vector<std::size_t> iceb, beb;
  for (std::size_t k = 0; k < K; ++k) (types[k].is_beb() ? beb : iceb).push_back(k);
  for (std::size_t s = 0; s < S; ++s) {
    for (int t = 0; t < n; ++t) {
      for (std::size_t k : iceb) {
        if (std::abs(cx[s][k][t] - cx[s][iceb[0]][t]) > 1e-9 * std::max(1.0, std::abs(cx[s][iceb[0]][t]))) {
          throw std::logic_error("ICEB classes differ in operating cost; pooling is not exact");
        }
      }
    }
  }
  const std::size_t C = 1 + beb.size();
  std::vector<std::vector<std::size_t>> group(C);
  group[0] = iceb;
  for (std::size_t j = 0; j < beb.size(); ++j) group[j + 1] = {beb[j]};

  // Stock carried in from before the horizon, per type and period.
  int h_max = 0;
  std::size_t initial_class = iceb[0];
  for (std::size_t k : iceb) {
    if (types[k].holding_period_years > h_max) {
      h_max = types[k].holding_period_years;
      initial_class = k;
    }
  }
  std::vector<std::vector<int>> carried(K, std::vector<int>(n, 0));
  for (const auto& e : config.initial_fleet) {
    const int bought = 1 - e.age_years;
    for (int t = 1; t <= n; ++t) {
      if (t <= bought + h_max - 1) carried[initial_class][t - 1] += e.count;
    }
  }

  // Cheapest purchases that cover a demand vector, per group, memoised on the
  // demand encoded in base S + 1.
  long demand_codes = 1;
  for (int t = 0; t < n; ++t) demand_codes *= (cap + 1);
  std::vector<std::vector<double>> purchase_memo(C, std::vector<double>(demand_codes, std::nan("")));
  auto purchase_cost = [&](std::size_t g, long code) {
    double& memo = purchase_memo[g][code];
    if (!std::isnan(memo)) return memo;
    std::vector<int> demand(n);
    for (int t = 0; t < n; ++t) {
      demand[t] = static_cast<int>(code % (cap + 1));
      code /= (cap + 1);
    }
    const auto& ks = group[g];
    std::vector<int> buy(ks.size() * n, 0);
    double best = kInf;
    std::function<void(std::size_t, double)> go = [&](std::size_t v, double cost) {
      if (v == buy.size()) {
        for (int t = 0; t < n; ++t) {
          int stock = 0;
          for (std::size_t j = 0; j < ks.size(); ++j) {
            stock += carried[ks[j]][t];
            const int h = types[ks[j]].holding_period_years;
            for (int tau = std::max(0, t - h + 1); tau <= t; ++tau) stock += buy[j * n + tau];
          }
          if (stock < demand[t]) return;
        }
        best = std::min(best, cost);
        return;
      }
      const std::size_t k = ks[v / n];
      const int t = static_cast<int>(v % n);
      for (int b = 0; b <= cap; ++b) {
        buy[v] = b;
        go(v + 1, cost + b * cp[k][t]);
      }
      buy[v] = 0;
    };
    go(0, 0.0);
    memo = best;
    return best;
  };

  // Depot chargers: nothing requires them in the uncoupled mode, but they are
  // still enumerated over non-decreasing counts.
  double best_depot = kInf;
  {
    std::vector<int> a(n, 0);
    std::function<void(int, int, double)> go = [&](int t, int lo, double cost) {
      if (t == n) {
        best_depot = std::min(best_depot, cost);
        return;
      }
      for (int v = lo; v <= cap; ++v) go(t + 1, v, cost + v * ca[t]);
    };
    go(0, 0, 0.0);
  }

  std::vector<SequenceProfile> profiles;
  for (const auto& s : schedule.sequences) profiles.push_back(make_profile(s, network));

  // Per period and equipped set: cheapest operating cost for each vector of
  // category counts.
  using CountMap = std::map<std::vector<int>, double>;
  auto period_options = [&](int t, const std::set<std::string>& equipped) {
    std::vector<std::vector<std::size_t>> allowed(S);
    for (std::size_t s = 0; s < S; ++s) {
      allowed[s].push_back(0);
      for (std::size_t j = 0; j < beb.size(); ++j) {
        const BusType& b = types[beb[j]];
        const bool ok = b.kind == BusKind::Ncb
                            ? ncb_feasible(profiles[s], b, config)
                            : simulate_sequence(profiles[s], b, equipped, config.charging_power_kw, config).feasible;
        if (ok) allowed[s].push_back(j + 1);
      }
    }
    CountMap out;
    std::vector<int> counts(C, 0);
    std::function<void(std::size_t, double)> go = [&](std::size_t s, double cost) {
      if (s == S) {
        auto [it, fresh] = out.emplace(counts, cost);
        if (!fresh) it->second = std::min(it->second, cost);
        return;
      }
      for (std::size_t c : allowed[s]) {
        const std::size_t k = c == 0 ? iceb[0] : beb[c - 1];
        ++counts[c];
        go(s + 1, cost + cx[s][k][t]);
        --counts[c];
      }
    };
    go(0, 0.0);
    return std::vector<std::pair<std::vector<int>, double>>(out.begin(), out.end());
  };

  Optimum result;
  double best = kInf;
  std::map<std::pair<int, unsigned>, std::vector<std::pair<std::vector<int>, double>>> options_cache;

  // Station i installs in period install[i] (1..n) or never (n + 1).
  std::vector<int> install(R, 1);
  std::function<void(std::size_t)> stations_loop = [&](std::size_t i) {
    if (i < R) {
      for (int tau = 1; tau <= n + 1; ++tau) {
        install[i] = tau;
        stations_loop(i + 1);
      }
      return;
    }
    double infra = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      for (int t = install[r]; t <= n; ++t) infra += cy[r][t - 1];
    }
    std::vector<const std::vector<std::pair<std::vector<int>, double>>*> options(n);
    for (int t = 1; t <= n; ++t) {
      unsigned mask = 0;
      std::set<std::string> equipped;
      for (std::size_t r = 0; r < R; ++r) {
        if (install[r] <= t) {
          mask |= 1u << r;
          equipped.insert(stations[r]);
        }
      }
      auto key = std::make_pair(t, mask);
      auto it = options_cache.find(key);
      if (it == options_cache.end()) it = options_cache.emplace(key, period_options(t - 1, equipped)).first;
      options[t - 1] = &it->second;
    }
    std::vector<long> code(C, 0);
    long weight = 1;
    std::function<void(int, double)> periods = [&](int t, double cost) {
      if (t == n) {
        ++result.leaves;
        double total = cost;
        for (std::size_t g = 0; g < C; ++g) total += purchase_cost(g, code[g]);
        best = std::min(best, total);
        return;
      }
      const long w = weight;
      for (const auto& [counts, op] : *options[t]) {
        for (std::size_t g = 0; g < C; ++g) code[g] += counts[g] * w;
        weight = w * (cap + 1);
        periods(t + 1, cost + op);
        for (std::size_t g = 0; g < C; ++g) code[g] -= counts[g] * w;
      }
      weight = w;
    };
    periods(0, infra);
  };
  stations_loop(0);

  if (best < kInf) {
    result.feasible = true;
    result.objective = base + best + best_depot;
  }
  return result;
}

}  // namespace oracle
