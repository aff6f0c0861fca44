#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bebplan/branch_and_bound.hpp"
#include "bebplan/energy.hpp"
#include "bebplan/error.hpp"
#include "bebplan/mps.hpp"
#include "bebplan/network.hpp"
#include "bebplan/plan.hpp"
#include "bebplan/scheduler.hpp"
#include "bebplan/sweep.hpp"
#include "bebplan/tco_model.hpp"

namespace fs = std::filesystem;
using namespace bebplan;

namespace {

struct Inputs {
  fs::path data_dir = ".";
  fs::path schedule_path;
  std::string scenario;
  double power_kw = -1.0;
  double battery_reduction_pct = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data", data_dir, "Directory with stations.csv, trips.csv, deadheads.csv, fleet.csv, scenario.json")
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--schedule", schedule_path, "Use this schedule.json instead of running the scheduler")
        ->check(CLI::ExistingFile);
  }
  void add_overrides(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Override the scenario (all, ic, nc, oc)");
    cmd->add_option("--power", power_kw, "Override the charging power, kW");
    cmd->add_option("--battery-reduction", battery_reduction_pct, "Override the battery price reduction, %/year");
  }
};

struct Loaded {
  Dataset data;
  VehicleSchedule schedule;
};

Loaded load(const Inputs& in) {
  Loaded out{load_network(in.data_dir), {}};
  for (const auto& w : out.data.warnings) std::cerr << "warning: " << w << '\n';
  if (!in.scenario.empty()) out.data.config.scenario = parse_scenario(in.scenario);
  if (in.power_kw >= 0.0) out.data.config.charging_power_kw = in.power_kw;
  if (in.battery_reduction_pct >= 0.0) out.data.config.battery_price_reduction_per_year = in.battery_reduction_pct / 100.0;
  out.data.config.validate();
  if (in.schedule_path.empty()) {
    out.schedule = build_schedule(out.data.network);
  } else {
    out.schedule = read_schedule(in.schedule_path);
    const auto issues = validate_schedule(out.schedule, out.data.network);
    if (!issues.empty()) {
      throw Error(ErrorCode::InvalidInput, in.schedule_path.string() + ": " + to_string(issues.front().kind) + " " +
                                               issues.front().detail);
    }
  }
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  std::vector<Scenario> out;
  std::stringstream ss(text);
  for (std::string s; std::getline(ss, s, ',');) out.push_back(parse_scenario(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fleet transformation planning for battery electric buses"};
  app.require_subcommand(1);

  Inputs in;
  fs::path schedule_out = "schedule.json", feas_out = "feasibility.csv", mps_out = "model.mps", solve_out = ".",
           sweep_out = "results";

  auto* schedule_cmd = app.add_subcommand("schedule", "Build the vehicle schedule and write schedule.json");
  in.add_to(schedule_cmd);
  schedule_cmd->add_option("--out", schedule_out, "Output file")->capture_default_str();

  auto* feas_cmd = app.add_subcommand("feasibility", "Minimum battery capacity per sequence across charging powers");
  in.add_to(feas_cmd);
  std::string feas_powers = "50:500:50";
  double q_max = 400.0;
  feas_cmd->add_option("--powers", feas_powers, "kW grid, start:stop:step or a comma list")->capture_default_str();
  feas_cmd->add_option("--q-max", q_max, "Largest battery, kWh")->capture_default_str();
  feas_cmd->add_option("--out", feas_out, "Output file")->capture_default_str();

  auto* mps_cmd = app.add_subcommand("export-mps", "Write the transformation model as free-format MPS");
  in.add_to(mps_cmd);
  in.add_overrides(mps_cmd);
  mps_cmd->add_option("--out", mps_out, "Output file")->capture_default_str();

  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario; writes plan.json and report.json");
  in.add_to(solve_cmd);
  in.add_overrides(solve_cmd);
  SolveLimits limits;
  fs::path export_mps;
  solve_cmd->add_option("--time-limit-s", limits.time_limit_s)->capture_default_str();
  solve_cmd->add_option("--node-limit", limits.node_limit)->capture_default_str();
  solve_cmd->add_option("--gap", limits.gap, "Relative optimality gap")->capture_default_str();
  solve_cmd->add_option("--threads", limits.threads)->capture_default_str()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--export-mps", export_mps, "Also write the model as MPS");
  solve_cmd->add_option("--out", solve_out, "Output directory")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve every (scenario, power, battery reduction) cell");
  in.add_to(sweep_cmd);
  std::string scenarios = "all,ic,nc,oc";
  std::string powers = "50:500:50";
  std::string reductions = "0:12.5:2.5";
  SweepSpec spec;
  sweep_cmd->add_option("--scenarios", scenarios)->capture_default_str();
  sweep_cmd->add_option("--powers", powers, "kW grid")->capture_default_str();
  sweep_cmd->add_option("--battery-reductions", reductions, "%/year grid")->capture_default_str();
  sweep_cmd->add_option("--time-limit-s", spec.limits.time_limit_s, "Per cell")->capture_default_str();
  sweep_cmd->add_option("--gap", spec.limits.gap)->capture_default_str();
  sweep_cmd->add_option("--workers", spec.workers, "Cells solved in parallel")->capture_default_str()->check(
      CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (schedule_cmd->parsed()) {
      const Loaded l = load(in);
      write_schedule(schedule_out, l.schedule);
      std::cout << l.schedule.fleet_size() << " sequences -> " << schedule_out.string() << '\n';
    } else if (feas_cmd->parsed()) {
      const Loaded l = load(in);
      const auto rows = feasibility_study(l.schedule, l.data.network, l.data.config, parse_grid(feas_powers), q_max);
      write_feasibility_csv(feas_out, rows);
      for (const auto& r : rows) std::cout << r.power_kw << " kW: " << r.share_pct << " % feasible\n";
    } else if (mps_cmd->parsed()) {
      const Loaded l = load(in);
      const TransformationModel model = build_mip(l.data.network, l.schedule, l.data.config);
      write_mps(mps_out, model.mip);
      std::cout << model.mip.columns.size() << " columns, " << model.mip.rows.size() << " rows -> "
                << mps_out.string() << '\n';
    } else if (solve_cmd->parsed()) {
      const Loaded l = load(in);
      const TransformationModel model = build_mip(l.data.network, l.schedule, l.data.config);
      if (!export_mps.empty()) write_mps(export_mps, model.mip);
      const std::vector<double> start = rounding_start(model, l.data.config);
      const SolveReport report = solve_mip(model.mip, limits, &start);
      const TransformationPlan plan = decode_plan(model.catalog, report.values);
      const CostReport costs = price_plan(plan, l.data.network, l.schedule, l.data.config);
      fs::create_directories(solve_out);
      write_json(solve_out / "plan.json", plan_to_json(plan, &costs));
      write_json(solve_out / "report.json", report_to_json(report));
      std::cout << to_string(report.status) << "  tco " << costs.tco << "  gap " << report.gap << "  nodes "
                << report.nodes << '\n';
      return report.status == SolveStatus::Optimal ? 0 : 2;
    } else if (sweep_cmd->parsed()) {
      const Loaded l = load(in);
      spec.scenarios = parse_scenarios(scenarios);
      spec.power_grid = parse_grid(powers);
      spec.battery_reduction_grid = parse_grid(reductions);
      spec.base = l.data.config;
      const auto rows = run_sweep(spec, l.data.network, l.schedule);
      emit_reports(rows, l.schedule, l.data.network, sweep_out);
      bool all_solved = true;
      for (const auto& r : rows) {
        if (!r.solved) {
          all_solved = false;
          std::cerr << to_string(r.scenario) << " r=" << r.r_kw << " b=" << r.b_pct << ": " << r.status << '\n';
        }
      }
      std::cout << rows.size() << " cells -> " << sweep_out.string() << '\n';
      return all_solved ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
