#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "satsim/phd_filter.hpp"
#include "satsim/types.hpp"
#include "satsim/world_model.hpp"

namespace sat {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ground-truth target script. Lifetimes are geometric with the given mean
// when lifetime_mean > 0, otherwise survival is governed by motion.ps.
struct TargetScript {
  enum class Spawn { Uniform, Center };
  int count = 0;
  Spawn spawn = Spawn::Uniform;
  int birth_window = 0;        // birth step uniform in [0, birth_window]
  double lifetime_mean = 0.0;  // steps; 0 => ps-driven survival
  double speed = 1.0;          // m/s per axis
};

// Every model constant of a simulation run. Defaults reproduce the standard
// evaluation setup (100 m x 100 m area, 17-action control set, etc.).
struct ScenarioConfig {
  // motion
  double sample_interval = 1.0;
  double survival_prob = 0.99;
  // sensor
  SensorModel sensor;
  // control
  ControlModel control;
  // surveillance area (origin at 0,0)
  double area_width = 100.0;
  double area_height = 100.0;
  // search grid
  double grid_cell = 10.0;
  double decay_j = 0.999;
  double beta = 0.5;
  double eps0 = 0.01;
  // PHD filter
  BirthModel birth;
  double rho = 1000.0;  // particles per expected target
  int kmeans_restarts = 10;
  // planner
  int connectivity = 8;
  double replan_fraction = 0.25;
  // tracking control
  double alpha = 0.5;
  int h_lost = 5;
  // overlap coordination
  int overlap_window = 3;
  double overlap_cutoff = 50.0;
  double q_threshold = 0.9;
  bool overlap_detection = true;
  // communication
  double comm_range = 50.0;
  // agents
  int n_agents = 2;
  bool random_search = false;
  // targets
  TargetScript targets;
  // run
  int horizon = 100;
  std::uint64_t seed = 1;
  // metrics
  double theta_s = 0.5;
  double eps_track = 5.0;
  double ospa_cutoff = 50.0;

  Rect area() const { return {0.0, 0.0, area_width, area_height}; }
  MotionModel motion() const {
    return MotionModel::near_constant_velocity(sample_interval, survival_prob);
  }

  // Throws ConfigError naming the violated rule.
  void validate() const;
};

// Parses "key = value" lines ('#' comments, blank lines allowed). Unknown
// keys and malformed values are errors naming the key. An empty file yields
// the defaults. The result is validated.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Canonical textual form; parse_config(save_config(c)) reproduces c.
std::string save_config(const ScenarioConfig& c);

}  // namespace sat
