#include "satsim/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "satsim/sim_engine.hpp"

namespace sat {

namespace {

// Shared experiment baseline: evaluation parameters with filter sizing
// chosen to keep full Monte-Carlo batches tractable on a laptop core.
ScenarioConfig experiment_base() {
  ScenarioConfig c;
  c.rho = 1000.0;
  c.birth.particles_per_step = 100;
  c.kmeans_restarts = 3;
  return c;
}

ScenarioConfig with_targets(ScenarioConfig c, int count, TargetScript::Spawn spawn,
                            double lifetime_mean, int birth_window) {
  c.targets.count = count;
  c.targets.spawn = spawn;
  c.targets.lifetime_mean = lifetime_mean;
  c.targets.birth_window = birth_window;
  return c;
}

std::vector<ExperimentPreset> build_presets() {
  std::vector<ExperimentPreset> out;

  {
    ExperimentPreset p{"fig5", "searched area vs communication range (2-5 agents, C_R 10/50)", 30, {}};
    for (double cr : {10.0, 50.0}) {
      for (int n : {2, 3, 4, 5}) {
        ScenarioConfig c = experiment_base();
        c.comm_range = cr;
        c.n_agents = n;
        p.arms.push_back({"cr" + std::to_string(static_cast<int>(cr)) + "_a" + std::to_string(n), c});
      }
    }
    out.push_back(std::move(p));
  }
  {
    ExperimentPreset p{"fig6", "cooperative search vs random baseline (2 and 4 agents)", 30, {}};
    for (int n : {2, 4}) {
      ScenarioConfig c = experiment_base();
      c.n_agents = n;
      p.arms.push_back({"coop_a" + std::to_string(n), c});
      c.random_search = true;
      p.arms.push_back({"random_a" + std::to_string(n), c});
    }
    out.push_back(std::move(p));
  }
  {
    ExperimentPreset p{"fig7", "OSPA error over time (10 center-spawned targets, 2-5 agents)", 30, {}};
    for (double cr : {10.0, 50.0}) {
      for (int n : {2, 3, 4, 5}) {
        ScenarioConfig c = with_targets(experiment_base(), 10, TargetScript::Spawn::Center, 60.0, 0);
        c.comm_range = cr;
        c.n_agents = n;
        p.arms.push_back({"cr" + std::to_string(static_cast<int>(cr)) + "_a" + std::to_string(n), c});
      }
    }
    out.push_back(std::move(p));
  }
  {
    ExperimentPreset p{"fig8", "searched area: search-only vs search-and-track (2-5 agents)", 30, {}};
    for (int n : {2, 3, 4, 5}) {
      ScenarioConfig c = experiment_base();
      c.n_agents = n;
      p.arms.push_back({"search_a" + std::to_string(n), c});
      ScenarioConfig s = with_targets(c, 10, TargetScript::Spawn::Uniform, 60.0, 0);
      p.arms.push_back({"sat_a" + std::to_string(n), s});
    }
    out.push_back(std::move(p));
  }
  {
    ExperimentPreset p{"fig10a", "tracking-time ratio vs agent count (20 targets, C_R=40)", 50, {}};
    for (int n : {2, 4, 6, 8, 10}) {
      ScenarioConfig c = with_targets(experiment_base(), 20, TargetScript::Spawn::Uniform, 30.0, 60);
      c.comm_range = 40.0;
      c.n_agents = n;
      p.arms.push_back({"a" + std::to_string(n), c});
    }
    out.push_back(std::move(p));
  }
  {
    ExperimentPreset p{"fig10b", "overlap detection on/off (15 targets, 5 agents, C_R=20)", 50, {}};
    ScenarioConfig c = with_targets(experiment_base(), 15, TargetScript::Spawn::Uniform, 30.0, 60);
    c.comm_range = 20.0;
    c.n_agents = 5;
    c.overlap_detection = true;
    p.arms.push_back({"tod_on", c});
    c.overlap_detection = false;
    p.arms.push_back({"tod_off", c});
    out.push_back(std::move(p));
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void append_metric_rows(std::string& out, const std::string& arm, int trial,
                        const std::string& metric, const std::vector<double>& series) {
  char buf[128];
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%zu,%s,%.9g\n", arm.c_str(), trial, k + 1,
                  metric.c_str(), series[k]);
    out += buf;
  }
}

}  // namespace

const std::vector<ExperimentPreset>& experiment_presets() {
  static const std::vector<ExperimentPreset> presets = build_presets();
  return presets;
}

const ExperimentPreset* find_preset(const std::string& name) {
  for (const ExperimentPreset& p : experiment_presets())
    if (p.name == name) return &p;
  return nullptr;
}

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, std::string* events_csv,
                      std::string* truth_csv) {
  Simulation sim(cfg, seed);
  sim.run();
  TrialResult r;
  r.seed = seed;
  r.searched = sim.searched_series();
  r.ospa = sim.ospa_series();
  r.tracking_ratio = tracking_ratio(sim.target_tallies());
  if (events_csv) *events_csv = sim.events_csv();
  if (truth_csv) *truth_csv = sim.truth_csv();
  return r;
}

std::vector<ArmResult> run_preset(const ExperimentPreset& preset, int trials,
                                  std::uint64_t base_seed, int jobs) {
  if (trials < 1) throw std::invalid_argument("run_preset: trials must be >= 1");
  std::vector<ArmResult> results;
  for (const ExperimentArm& arm : preset.arms) {
    ArmResult ar;
    ar.id = arm.id;
    ar.trials.resize(trials);
    if (jobs <= 1) {
      for (int t = 0; t < trials; ++t) {
        ar.trials[t] = run_trial(arm.cfg, base_seed + t, t == 0 ? &ar.events_csv : nullptr,
                                 t == 0 ? &ar.truth_csv : nullptr);
      }
    } else {
      std::atomic<int> next{0};
      auto worker = [&]() {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
          ar.trials[t] = run_trial(arm.cfg, base_seed + t, t == 0 ? &ar.events_csv : nullptr,
                                   t == 0 ? &ar.truth_csv : nullptr);
        }
      };
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }
    results.push_back(std::move(ar));
  }
  return results;
}

void write_outputs(const std::vector<ArmResult>& results, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string rows = "experiment_id,trial,step,metric,value\n";
  std::string summary = "experiment_id,metric,step,mean,std\n";
  char buf[160];
  for (const ArmResult& arm : results) {
    std::vector<std::vector<double>> searched, ospa_s;
    std::vector<double> ratios;
    for (std::size_t t = 0; t < arm.trials.size(); ++t) {
      const TrialResult& tr = arm.trials[t];
      append_metric_rows(rows, arm.id, static_cast<int>(t), "searched_fraction", tr.searched);
      append_metric_rows(rows, arm.id, static_cast<int>(t), "ospa", tr.ospa);
      std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,tracking_ratio,%.9g\n", arm.id.c_str(), t,
                    tr.searched.size(), tr.tracking_ratio);
      rows += buf;
      searched.push_back(tr.searched);
      ospa_s.push_back(tr.ospa);
      ratios.push_back(tr.tracking_ratio);
    }
    const Series fs = aggregate(searched);
    const Series os = aggregate(ospa_s);
    for (std::size_t k = 0; k < fs.mean.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%s,searched_fraction,%zu,%.9g,%.9g\n", arm.id.c_str(),
                    k + 1, fs.mean[k], fs.stddev[k]);
      summary += buf;
      std::snprintf(buf, sizeof(buf), "%s,ospa,%zu,%.9g,%.9g\n", arm.id.c_str(), k + 1,
                    os.mean[k], os.stddev[k]);
      summary += buf;
    }
    double mean = 0.0, var = 0.0;
    for (double r : ratios) mean += r / ratios.size();
    for (double r : ratios) var += (r - mean) * (r - mean) / ratios.size();
    std::snprintf(buf, sizeof(buf), "%s,tracking_ratio,%zu,%.9g,%.9g\n", arm.id.c_str(),
                  fs.mean.size(), mean, std::sqrt(var));
    summary += buf;

    write_file(out_dir + "/events_" + arm.id + ".csv", arm.events_csv);
    write_file(out_dir + "/truth_" + arm.id + ".csv", arm.truth_csv);
  }
  write_file(out_dir + "/results.csv", rows);
  write_file(out_dir + "/summary.csv", summary);
}

std::vector<std::vector<double>> series_of(const ArmResult& arm, bool ospa) {
  std::vector<std::vector<double>> out;
  for (const TrialResult& t : arm.trials) out.push_back(ospa ? t.ospa : t.searched);
  return out;
}

double mean_at(const ArmResult& arm, bool ospa, int step) {
  double sum = 0.0;
  for (const TrialResult& t : arm.trials) sum += (ospa ? t.ospa : t.searched).at(step - 1);
  return sum / arm.trials.size();
}

double mean_over(const ArmResult& arm, bool ospa, int from_step, int to_step) {
  double sum = 0.0;
  int count = 0;
  for (const TrialResult& t : arm.trials) {
    const std::vector<double>& s = ospa ? t.ospa : t.searched;
    for (int k = from_step; k <= to_step; ++k) {
      sum += s.at(k - 1);
      ++count;
    }
  }
  return sum / count;
}

double mean_tracking_ratio(const ArmResult& arm) {
  double sum = 0.0;
  for (const TrialResult& t : arm.trials) sum += t.tracking_ratio;
  return sum / arm.trials.size();
}

}  // namespace sat
