//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moso/config.hpp"
#include "moso/orchestrator.hpp"
#include "moso/pareto.hpp"
#include "moso/report.hpp"
#include "moso/testbed.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::vector<double> parse_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size())
      throw std::invalid_argument(item);
  }
  return out;
}

void write_file(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content))
    throw moso::Error("cannot write " + path.string());
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> workers;
  std::string checkpoint;
  std::string out = ".";
};

int run(const RunArgs &a) {
  moso::RunConfig rc;
  try {
    rc = moso::load_config(a.config, {a.seed, a.budget, a.workers});
  } catch (const moso::ValidationError &e) {
    std::cerr << "config error:\n";
    for (const auto &msg : e.errors())
      std::cerr << "  " << msg << '\n';
    return kExitConfig;
  } catch (const moso::Error &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (rc.budget == 0) {
    std::cerr << "config error: no budget given\n";
    return kExitConfig;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    moso::Moop moop(rc.definition);
    moop.set_workers(rc.workers);
    if (!a.checkpoint.empty()) {
      if (fs::exists(a.checkpoint))
        moop.checkpoint_load(a.checkpoint);
      moop.set_checkpoint_path(fs::path(a.checkpoint));
    }
    const auto archive = moop.solve(rc.budget);
    const double walltime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out(a.out);
    fs::create_directories(out);
    const auto &problem = moop.problem();
    {
      std::ostringstream ss;
      moso::report::write_database_csv(ss, problem, moop.database());
      write_file(out / "database.csv", ss.str());
    }
    {
      std::ostringstream ss;
      moso::report::write_pareto_csv(ss, problem, moop.database(), archive);
      write_file(out / "pareto.csv", ss.str());
    }
    if (rc.reference) {
      std::vector<std::string> names;
      for (const auto &f : problem.definition().objectives)
        names.push_back(f.name);
      std::ostringstream ss;
      moso::report::write_metrics_csv(ss, names,
                                      moso::report::trajectory(moop.database(), *rc.reference));
      write_file(out / "metrics.csv", ss.str());
    } else {
      std::cerr << "warning: no metrics.reference in config, metrics.csv not written\n";
    }
    nlohmann::json meta = {{"seed", rc.definition.rng_seed},
                           {"config_hash", moso::config_hash(rc)},
                           {"walltime_seconds", walltime},
                           {"budget", rc.budget},
                           {"workers", rc.workers},
                           {"evaluations", moop.evaluations()},
                           {"records", moop.database().size()},
                           {"iterations", moop.next_iteration()},
                           {"lambda", moop.penalty().lambda}};
    write_file(out / "run_meta.json", meta.dump(2) + "\n");
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

struct MetricsArgs {
  std::string db;
  std::string ref;
  std::string mode = "absolute";
  std::optional<double> hv_max;
};

int metrics(const MetricsArgs &a) {
  std::vector<double> ref;
  try {
    ref = parse_list(a.ref);
  } catch (const std::exception &) {
    std::cerr << "error: --ref must be a comma-separated list of numbers\n";
    return kExitConfig;
  }
  if (a.mode != "absolute" && a.mode != "relative_to_initial" && a.mode != "relative_to_gap") {
    std::cerr << "error: unknown mode " << a.mode << '\n';
    return kExitConfig;
  }
  if (a.mode == "relative_to_gap" && !a.hv_max) {
    std::cerr << "error: relative_to_gap needs --hv-max\n";
    return kExitConfig;
  }
  try {
    std::ifstream in(a.db);
    if (!in)
      throw moso::Error("cannot read " + a.db);
    const auto table = moso::report::read_database_csv(in);
    if (table.objective_names.size() != ref.size())
      throw moso::Error("--ref has " + std::to_string(ref.size()) + " entries, database has " +
                        std::to_string(table.objective_names.size()) + " objectives");
    const auto rows =
        moso::report::trajectory(table.iteration, table.objectives, table.feasible, ref);
    std::cout << "iteration,records,hypervolume";
    if (a.mode != "absolute")
      std::cout << ",pct_improvement";
    std::cout << '\n';
    for (const auto &r : rows) {
      std::cout << r.iteration << ',' << r.records << ','
                << moso::report::format_double(r.hypervolume);
      if (a.mode != "absolute") {
        const auto mode = a.mode == "relative_to_initial"
                              ? moso::ImprovementMode::relative_to_initial
                              : moso::ImprovementMode::relative_to_gap;
        std::cout << ','
                  << moso::report::format_double(moso::pct_hv_improvement(
                         r.hypervolume, rows.front().hypervolume, mode, a.hv_max));
      }
      std::cout << '\n';
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

struct ScalingArgs {
  std::string workers_list = "1,2,4,8";
  std::string sim_delay = "0.05,0.15";
  std::size_t budget = 160;
  std::uint64_t seed = 0;
};

int bench_scaling(const ScalingArgs &a) {
  std::vector<double> workers, delay;
  try {
    workers = parse_list(a.workers_list);
    delay = parse_list(a.sim_delay);
  } catch (const std::exception &) {
    std::cerr << "error: lists must be comma-separated numbers\n";
    return kExitConfig;
  }
  if (delay.size() != 2 || workers.empty()) {
    std::cerr << "error: --sim-delay needs two values and --workers-list at least one\n";
    return kExitConfig;
  }
  try {
    std::cout << "workers,walltime_seconds,evaluations\n";
    for (double w : workers) {
      if (w < 1 || w != std::floor(w))
        throw moso::Error("worker counts must be positive integers");
      moso::Moop moop(moso::testbed::scaling_problem(delay[0], delay[1], a.seed));
      moop.set_workers(static_cast<std::size_t>(w));
      const auto t0 = std::chrono::steady_clock::now();
      moop.solve(a.budget);
      const double t =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << static_cast<std::size_t>(w) << ',' << moso::report::format_double(t) << ','
                << moop.evaluations() << '\n'
                << std::flush;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multiobjective simulation optimization with surrogate models"};
  app.require_subcommand(1);

  RunArgs ra;
  auto *run_cmd = app.add_subcommand("run", "Run a configured solve");
  run_cmd->add_option("--config", ra.config, "Problem configuration (JSON)")->required();
  run_cmd->add_option("--seed", ra.seed, "Random seed");
  run_cmd->add_option("--budget", ra.budget, "Maximum simulation evaluations");
  run_cmd->add_option("--workers", ra.workers, "Simulation worker threads");
  run_cmd->add_option("--checkpoint", ra.checkpoint,
                      "Checkpoint file; resumed from when it exists");
  run_cmd->add_option("--out", ra.out, "Output directory");

  MetricsArgs ma;
  auto *metrics_cmd = app.add_subcommand("metrics", "Hypervolume trajectory of a database");
  metrics_cmd->add_option("--db", ma.db, "database.csv of a run")->required();
  metrics_cmd->add_option("--ref", ma.ref, "Reference point, e.g. 1,1,1")->required();
  metrics_cmd->add_option("--mode", ma.mode, "absolute, relative_to_initial or relative_to_gap");
  metrics_cmd->add_option("--hv-max", ma.hv_max, "Largest attainable hypervolume (gap mode)");

  ScalingArgs sa;
  auto *scaling_cmd = app.add_subcommand("bench-scaling", "Walltime per worker count");
  scaling_cmd->add_option("--workers-list", sa.workers_list, "Worker counts, e.g. 1,2,4,8");
  scaling_cmd->add_option("--sim-delay", sa.sim_delay, "Sleep range in seconds, e.g. 0.05,0.15");
  scaling_cmd->add_option("--budget", sa.budget, "Evaluations per run");
  scaling_cmd->add_option("--seed", sa.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*run_cmd)
    return run(ra);
  if (*metrics_cmd)
    return metrics(ma);
  return bench_scaling(sa);
}
