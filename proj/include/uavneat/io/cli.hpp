#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavneat/io/config_file.hpp"
#include "uavneat/io/csv.hpp"
#include "uavneat/neat/serialize.hpp"
#include "uavneat/oracle/grid_search.hpp"
#include "uavneat/sim/sweep.hpp"
#include "uavneat/sim/train.hpp"

namespace uavneat::io {

namespace detail {
inline RunConfig config_or_default(const std::string& path) {
  return path.empty() ? parse_config("") : load_config(path);
}
}  // namespace detail

// Entry point shared by the command-line tool and the tests. Returns the
// process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"UAV NOMA placement and power allocation by neuroevolution"};
  app.require_subcommand(1);

  std::string config_path;
  std::string genome_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int runs = 10;
  double spacing = 5.0;
  double alpha_step = 0.01;
  std::vector<double> heights{10.0, 30.0, 50.0};
  bool fair = false;

  auto* train_cmd = app.add_subcommand("train", "evolve a controller and write generations.csv, champion.json");
  train_cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = train_cmd->add_option("--seed", seed, "master seed (overrides [run] master_seed)");
  train_cmd->add_option("--out", out_dir, "output directory (overrides [run] output_dir)");

  auto* eval_cmd = app.add_subcommand("eval", "replay a genome and write trace.csv");
  eval_cmd->add_option("--genome", genome_path, "genome file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", out_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "energy-efficiency sweep over transmit power, writes ee_curve.csv");
  sweep_cmd->add_option("--genome", genome_path, "genome file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", out_dir, "output directory");

  auto* oracle_cmd = app.add_subcommand("oracle", "static grid-search optimum, writes oracle.json");
  oracle_cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--spacing", spacing, "horizontal grid spacing in meters")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--alpha-step", alpha_step, "power-coefficient grid step")->check(CLI::Range(1e-6, 0.5));
  oracle_cmd->add_option("--heights", heights, "candidate heights in meters")->delimiter(',');
  oracle_cmd->add_flag("--fair", fair, "discard candidates violating the minimum rate");
  oracle_cmd->add_option("--out", out_dir, "output directory");

  auto* ci_cmd = app.add_subcommand("ci", "multi-seed training, writes ci.csv");
  ci_cmd->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  ci_cmd->add_option("--runs", runs, "number of independent runs")->check(CLI::Range(2, 1000000));
  ci_cmd->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig cfg = detail::config_or_default(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const std::filesystem::path dir = cfg.output_dir;
    const int steps = cfg.schedule.steps_per_episode;

    if (*train_cmd) {
      if (*seed_opt) cfg.master_seed = seed;
      auto result = sim::train(cfg);
      write_file(dir, "generations.csv", [&](std::ostream& os) { write_generations(os, result.records); });
      write_file(dir, "champion.json",
                 [&](std::ostream& os) { os << neat::genome_to_json(result.champion).dump(2) << '\n'; });
      sim::EpisodeTrace trace;
      sim::run_episode(result.champion, cfg.scene, cfg.channel, cfg.reward, steps, &trace);
      write_file(dir, "trace.csv", [&](std::ostream& os) { write_trace(os, trace, cfg.scene.user_count()); });
      out << "train: generations=" << result.records.size() << " best_fitness=" << fmt9(*result.champion.fitness)
          << " mean_sum_se=" << fmt9(result.champion_metrics.mean_sum_se)
          << " convergence_generation=" << sim::convergence_generation(result.records) << " out=" << dir.string()
          << '\n';
    } else if (*eval_cmd) {
      auto genome = neat::read_genome(genome_path);
      sim::EpisodeTrace trace;
      auto m = sim::run_episode(genome, cfg.scene, cfg.channel, cfg.reward, steps, &trace);
      write_file(dir, "trace.csv", [&](std::ostream& os) { write_trace(os, trace, cfg.scene.user_count()); });
      out << "eval: mean_reward=" << fmt9(m.mean_reward) << " mean_sum_se=" << fmt9(m.mean_sum_se)
          << " satisfaction=" << fmt9(m.satisfaction) << " final=(" << fmt9(m.final_position.x) << ','
          << fmt9(m.final_position.y) << ',' << fmt9(m.final_position.h) << ")\n";
    } else if (*sweep_cmd) {
      auto genome = neat::read_genome(genome_path);
      auto curve = sim::power_sweep(genome, cfg.scene, cfg.channel, cfg.reward, cfg.sweep, steps);
      write_file(dir, "ee_curve.csv", [&](std::ostream& os) { write_ee_curve(os, curve); });
      auto peak = std::max_element(curve.begin(), curve.end(),
                                   [](const auto& a, const auto& b) { return a.ee < b.ee; });
      out << "sweep: points=" << curve.size() << " peak_ee=" << fmt9(peak->ee) << " at_dbm=" << fmt9(peak->pt_dbm)
          << '\n';
    } else if (*oracle_cmd) {
      oracle::GridSpec grid{spacing, heights, alpha_step, fair};
      auto r = oracle::grid_search(cfg.scene, cfg.channel, cfg.reward, grid);
      write_file(dir, "oracle.json", [&](std::ostream& os) { os << oracle_to_json(r).dump(2) << '\n'; });
      if (!r.feasible) {
        out << "oracle: infeasible (no grid candidate meets the minimum rate)\n";
      } else {
        out << "oracle: sum_se=" << fmt9(r.sum_se) << " position=(" << fmt9(r.position.x) << ','
            << fmt9(r.position.y) << ',' << fmt9(r.position.h) << ")\n";
      }
    } else if (*ci_cmd) {
      const auto seeds = sim::run_seeds(cfg, static_cast<std::size_t>(runs));
      auto rows = sim::multi_seed(cfg, seeds);
      write_file(dir, "ci.csv", [&](std::ostream& os) { write_ci(os, rows, seeds.size()); });
      out << "ci: runs=" << seeds.size() << " generations=" << rows.size()
          << " final_best_mean=" << fmt9(rows.back().best_mean) << " final_best_std=" << fmt9(rows.back().best_std)
          << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace uavneat::io
