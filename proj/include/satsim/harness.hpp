#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satsim/config.hpp"
#include "satsim/metrics.hpp"

namespace sat {

struct ExperimentArm {
  std::string id;
  ScenarioConfig cfg;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  int default_trials = 50;
  std::vector<ExperimentArm> arms;
};

// The built-in experiment presets (fig5..fig10b), stable order.
const std::vector<ExperimentPreset>& experiment_presets();
const ExperimentPreset* find_preset(const std::string& name);

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<double> searched;
  std::vector<double> ospa;
  double tracking_ratio = 0.0;
};

// Runs one trial; optionally captures the event and ground-truth logs.
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed,
                      std::string* events_csv = nullptr, std::string* truth_csv = nullptr);

struct ArmResult {
  std::string id;
  std::vector<TrialResult> trials;
  std::string events_csv;  // trial 0
  std::string truth_csv;   // trial 0
};

// Trial t of every arm uses seed base_seed + t, so arms share their world
// realization. `jobs` > 1 runs trials concurrently; results are ordered by
// trial index either way.
std::vector<ArmResult> run_preset(const ExperimentPreset& preset, int trials,
                                  std::uint64_t base_seed, int jobs = 1);

// results.csv, summary.csv and per-arm event/truth logs under out_dir.
void write_outputs(const std::vector<ArmResult>& results, const std::string& out_dir);

// Convenience accessors used by the acceptance checks.
std::vector<std::vector<double>> series_of(const ArmResult& arm, bool ospa);
double mean_at(const ArmResult& arm, bool ospa, int step);
double mean_over(const ArmResult& arm, bool ospa, int from_step, int to_step);
double mean_tracking_ratio(const ArmResult& arm);

}  // namespace sat
