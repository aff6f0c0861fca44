#include "bebplan/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "bebplan/emissions.hpp"
#include "bebplan/energy.hpp"
#include "bebplan/error.hpp"
#include "bebplan/tco_model.hpp"

namespace bebplan {

namespace {

void check_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw Error(ErrorCode::InvalidInput, std::string(name) + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidInput, std::string(name) + " is not increasing");
  }
}

std::string number(double v, int decimals) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << v;
  return s.str();
}

// Grid values as written in the key columns: no trailing zeros.
std::string key_number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

void SweepSpec::validate() const {
  if (scenarios.empty()) throw Error(ErrorCode::InvalidInput, "no scenarios given");
  check_grid(power_grid, "power grid");
  check_grid(battery_reduction_grid, "battery reduction grid");
}

std::string report_column(const BusType& type) {
  if (type.kind == BusKind::Iceb) return "iceb";
  std::ostringstream s;
  s << (type.kind == BusKind::Ocb ? "ocb_" : "ncb_") << type.battery_capacity_kwh;
  return s.str();
}

std::vector<std::string> report_columns(const ScenarioConfig& config) {
  std::vector<std::string> cols = {"iceb"};
  std::vector<double> caps = config.beb.capacities_kwh;
  std::sort(caps.begin(), caps.end());
  for (const char* kind : {"ocb_", "ncb_"}) {
    for (double q : caps) {
      std::ostringstream s;
      s << kind << q;
      cols.push_back(s.str());
    }
  }
  return cols;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto to_num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidInput, "bad grid value '" + s + "' in '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorCode::InvalidInput, "grid '" + text + "' must be start:stop:step");
    const double start = to_num(parts[0]);
    const double stop = to_num(parts[1]);
    const double step = to_num(parts[2]);
    if (step <= 0.0 || stop < start) throw Error(ErrorCode::InvalidInput, "grid '" + text + "' is empty");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_num(p));
  return out;
}

SweepRow solve_cell(Scenario scenario, double r_kw, double b_pct, const SweepSpec& spec, const Network& network,
                    const VehicleSchedule& schedule) {
  SweepRow row;
  row.scenario = scenario;
  row.r_kw = r_kw;
  row.b_pct = b_pct;
  row.config = spec.base;
  row.config.scenario = scenario;
  row.config.charging_power_kw = r_kw;
  row.config.battery_price_reduction_per_year = b_pct / 100.0;
  try {
    const TransformationModel model = build_mip(network, schedule, row.config);
    const std::vector<double> start = rounding_start(model, row.config);
    const SolveReport report = solve_mip(model.mip, spec.limits, &start);
    row.status = to_string(report.status);
    row.gap = report.gap;
    row.solved = report.has_incumbent && report.gap <= spec.limits.gap;
    TransformationPlan plan = decode_plan(model.catalog, report.values);
    row.tco = price_plan(plan, network, schedule, row.config).tco;
    const int n = plan.periods;
    for (std::size_t k = 0; k < model.catalog.types.size(); ++k) {
      row.bus_counts[report_column(model.catalog.types[k])] += static_cast<int>(std::lround(plan.n[k][n - 1]));
    }
    row.ncf = static_cast<int>(std::lround(plan.a[n - 1]));
    for (const auto& y : plan.y) row.ocf += static_cast<int>(std::lround(y[n - 1]));
    for (int t = 1; t <= n; ++t) row.nox_by_period.push_back(annual_nox(plan, schedule, network, row.config, t));
    row.nox_t_per_year = row.nox_by_period.back();
    row.plan = std::move(plan);
  } catch (const Error& e) {
    row.solved = false;
    row.status = std::string("failed: ") + e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Network& network, const VehicleSchedule& schedule) {
  spec.validate();
  struct Cell {
    Scenario s;
    double r;
    double b;
  };
  std::vector<Cell> cells;
  for (Scenario s : spec.scenarios) {
    for (double r : spec.power_grid) {
      for (double b : spec.battery_reduction_grid) cells.push_back({s, r, b});
    }
  }
  std::vector<SweepRow> rows(cells.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, spec.workers));
  // Cells are independent; each worker takes every workers-th cell and the
  // rows land in their cell slot, so the output order never changes.
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w) {
    jobs.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [&, w] {
      for (std::size_t i = w; i < cells.size(); i += workers) {
        rows[i] = solve_cell(cells[i].s, cells[i].r, cells[i].b, spec, network, schedule);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

void emit_reports(const std::vector<SweepRow>& rows, const VehicleSchedule& schedule, const Network& network,
                  const std::filesystem::path& out_dir) {
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, "no sweep rows to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  const std::vector<std::string> cols = report_columns(rows.front().config);
  auto key = [](const SweepRow& r) { return to_string(r.scenario) + ',' + key_number(r.r_kw) + ',' + key_number(r.b_pct); };
  auto counts = [&](std::ostream& out, const SweepRow& r, const std::map<std::string, int>& c) {
    for (const auto& col : cols) {
      auto it = c.find(col);
      // Types the scenario cannot buy are marked, not reported as zero.
      const bool offered = col == "iceb" || scenario_allows(r.scenario, col[0] == 'o' ? BusKind::Ocb : BusKind::Ncb);
      out << ',';
      if (!offered) out << '-';
      else out << (it == c.end() ? 0 : it->second);
    }
  };

  {
    auto out = open_csv(out_dir / "results.csv");
    out << "scenario,r_kw,b_pct";
    for (const auto& c : cols) out << ',' << c;
    out << ",ncf,ocf,tco_eur,nox_t_per_year,gap,status\n";
    for (const auto& r : rows) {
      out << key(r);
      if (r.plan) {
        counts(out, r, r.bus_counts);
        out << ',' << r.ncf << ',' << r.ocf << ',' << number(r.tco, 2) << ',' << number(r.nox_t_per_year, 2) << ','
            << std::scientific << std::setprecision(3) << r.gap << std::defaultfloat;
      } else {
        for (std::size_t i = 0; i < cols.size() + 5; ++i) out << ',';
      }
      std::string status = r.status;
      std::replace(status.begin(), status.end(), ',', ';');
      std::replace(status.begin(), status.end(), '\n', ' ');
      out << ',' << status << '\n';
    }
  }

  {
    auto out = open_csv(out_dir / "fleet_timeline.csv");
    out << "scenario,r_kw,b_pct,t";
    for (const auto& c : cols) out << ',' << c;
    out << ",nox_t_per_year\n";
    for (const auto& r : rows) {
      if (!r.plan) continue;
      const auto types = build_catalog(r.config);
      for (int t = 1; t <= r.plan->periods; ++t) {
        std::map<std::string, int> c;
        for (std::size_t k = 0; k < types.size(); ++k) {
          c[report_column(types[k])] += static_cast<int>(std::lround(r.plan->n[k][t - 1]));
        }
        out << key(r) << ',' << t;
        counts(out, r, c);
        out << ',' << number(r.nox_by_period[t - 1], 2) << '\n';
      }
    }
  }

  {
    auto out = open_csv(out_dir / "chargers.csv");
    out << "scenario,r_kw,b_pct,station,install_period\n";
    for (const auto& r : rows) {
      if (!r.plan) continue;
      for (std::size_t i = 0; i < r.plan->stations.size(); ++i) {
        for (int t = 1; t <= r.plan->periods; ++t) {
          if (r.plan->y[i][t - 1] > 0.5) {
            out << key(r) << ',' << r.plan->stations[i] << ',' << t << '\n';
            break;
          }
        }
      }
    }
  }

  {
    auto out = open_csv(out_dir / "assignment.csv");
    out << "scenario,r_kw,b_pct,sequence,t,type,energy_kwh,max_dwell_min\n";
    std::vector<SequenceProfile> profiles;
    for (const auto& s : schedule.sequences) profiles.push_back(make_profile(s, network));
    for (const auto& r : rows) {
      if (!r.plan) continue;
      const double lo = r.config.beb.consumption_kwh_per_km;
      const double le = r.config.beb_empty_consumption();
      for (std::size_t s = 0; s < profiles.size(); ++s) {
        double dwell = 0.0;
        for (const auto& stop : profiles[s].stops) dwell = std::max(dwell, stop.dwell_h * 60.0);
        for (int t = 1; t <= r.plan->periods; ++t) {
          const int k = r.plan->assigned_type(s, t);
          out << key(r) << ',' << schedule.sequences[s].sequence_id << ',' << t << ','
              << (k >= 0 ? r.plan->type_ids[static_cast<std::size_t>(k)] : "-") << ','
              << number(profiles[s].consumption(lo, le), 2) << ',' << number(dwell, 1) << '\n';
        }
      }
    }
  }
}

}  // namespace bebplan
