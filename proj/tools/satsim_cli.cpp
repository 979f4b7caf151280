#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "satsim/harness.hpp"
#include "satsim/sim_engine.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string preset_listing() {
  std::string out;
  for (const sat::ExperimentPreset& p : sat::experiment_presets())
    out += p.name + "  " + p.description + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent search-and-track simulator"};
  app.require_subcommand(1);

  // run
  std::string preset_name, out_dir = "out", config_path;
  int trials = 0;
  std::uint64_t seed = 1;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "Run an experiment preset and write CSV results");
  run->add_option("--preset", preset_name, "Preset name (see list-presets)")->required();
  run->add_option("--trials", trials, "Monte-Carlo trials (default: preset choice)");
  run->add_option("--seed", seed, "Base RNG seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Concurrent trials");

  // list-presets
  CLI::App* list = app.add_subcommand("list-presets", "List experiment presets");

  // dump-grid
  std::string dg_config, dg_out = "grid.csv";
  int dg_steps = 20;
  std::uint64_t dg_seed = 1;
  CLI::App* dump_grid =
      app.add_subcommand("dump-grid", "Simulate and dump agent 0's fused search grid as CSV");
  dump_grid->add_option("--config", dg_config, "Scenario config file (empty = defaults)");
  dump_grid->add_option("--steps", dg_steps, "Steps to simulate");
  dump_grid->add_option("--seed", dg_seed, "RNG seed");
  dump_grid->add_option("--out", dg_out, "Output CSV path");

  // dump-plan
  std::string dp_config, dp_out = "plan.csv";
  int dp_steps = 1;
  std::uint64_t dp_seed = 1;
  CLI::App* dump_plan = app.add_subcommand("dump-plan", "Simulate and dump agent plans as CSV");
  dump_plan->add_option("--config", dp_config, "Scenario config file (empty = defaults)");
  dump_plan->add_option("--steps", dp_steps, "Steps to simulate");
  dump_plan->add_option("--seed", dp_seed, "RNG seed");
  dump_plan->add_option("--out", dp_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << preset_listing();
      return 0;
    }
    if (run->parsed()) {
      const sat::ExperimentPreset* p = sat::find_preset(preset_name);
      if (!p) {
        std::cerr << "unknown preset '" << preset_name << "'; available presets:\n"
                  << preset_listing();
        return 1;
      }
      if (run->count("--trials") && trials < 1) {
        std::cerr << "--trials must be >= 1\n";
        return 1;
      }
      const int n = run->count("--trials") ? trials : p->default_trials;
      const auto results = sat::run_preset(*p, n, seed, jobs);
      sat::write_outputs(results, out_dir);
      std::cout << "wrote " << out_dir << "/results.csv and summary.csv ("
                << p->arms.size() << " arms x " << n << " trials)\n";
      return 0;
    }
    if (dump_grid->parsed()) {
      sat::ScenarioConfig cfg =
          dg_config.empty() ? sat::ScenarioConfig{} : sat::load_config(dg_config);
      cfg.validate();
      sat::Simulation sim(cfg, dg_seed);
      for (int i = 0; i < dg_steps; ++i) sim.step();
      sat::SearchGrid fused = sim.agents()[0].grid;
      for (std::size_t i = 1; i < sim.agents().size(); ++i)
        fused = sat::fuse(fused, sim.agents()[i].grid);
      write_file(dg_out, fused.to_csv());
      std::cout << "wrote " << dg_out << "\n";
      return 0;
    }
    if (dump_plan->parsed()) {
      sat::ScenarioConfig cfg =
          dp_config.empty() ? sat::ScenarioConfig{} : sat::load_config(dp_config);
      cfg.validate();
      sat::Simulation sim(cfg, dp_seed);
      for (int i = 0; i < dp_steps; ++i) sim.step();
      sat::SearchGrid proto(cfg.area(), cfg.grid_cell, cfg.decay_j, cfg.beta, cfg.eps0);
      sat::SearchGraph graph(proto, cfg.connectivity);
      std::string out = "agent_id,seq,node_x,node_y\n";
      char buf[96];
      for (const sat::Agent& ag : sim.agents()) {
        for (std::size_t s = 0; s < ag.plan.nodes.size(); ++s) {
          const sat::Vec2 c = graph.node_center(ag.plan.nodes[s]);
          std::snprintf(buf, sizeof(buf), "%d,%zu,%.9g,%.9g\n", ag.id, s, c.x, c.y);
          out += buf;
        }
      }
      write_file(dp_out, out);
      std::cout << "wrote " << dp_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
