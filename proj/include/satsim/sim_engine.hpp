#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "satsim/config.hpp"
#include "satsim/overlap.hpp"
#include "satsim/phd_filter.hpp"
#include "satsim/rng.hpp"
#include "satsim/search_density.hpp"
#include "satsim/search_planner.hpp"
#include "satsim/types.hpp"
#include "satsim/world_model.hpp"

namespace sat {

struct TargetTruth {
  int id = 0;
  KinematicState x;
  int birth = 0;
  int death = 0;  // exclusive; alive for birth <= k < death

  bool alive(int k) const { return k >= birth && k < death; }
};

struct WorldState {
  int k = 0;
  std::vector<TargetTruth> targets;
  Rect area;

  std::vector<Vec2> alive_positions() const;
};

// Scripts the ground-truth targets (birth steps, lifetimes, initial states)
// from the world stream.
WorldState make_world(const ScenarioConfig& cfg, RngStream& world_rng);

// Advances the world one step: scripted deaths (or survival draws when no
// lifetime is scripted), noisy propagation, death on leaving the area.
void step_world(WorldState& w, const ScenarioConfig& cfg, const MotionModel& m,
                RngStream& world_rng);

// Detections of in-range alive targets plus Poisson clutter uniform over the
// surveillance area.
std::vector<Measurement> generate_measurements(const WorldState& w, const Vec2& s,
                                               const SensorModel& sm, RngStream& rng);

// All unordered agent-index pairs within communication range.
std::vector<std::pair<int, int>> communication_pairs(const std::vector<Vec2>& positions,
                                                     double comm_range);

enum class Mode { Searching, Tracking };

struct Agent {
  int id = 0;
  Vec2 pos;
  Vec2 prev_pos;
  Mode mode = Mode::Searching;
  ParticlePhd phd;
  Estimate est_post;
  SearchGrid grid;
  Plan plan;
  std::size_t plan_cursor = 0;
  std::size_t plan_vbar_size = 0;  // |V_bar| when the plan was made
  bool in_joint_plan = false;
  std::set<int> cohort;
  int lost_steps = 0;

  explicit Agent(const SearchGrid& g) : grid(g) {}
};

// Event-based suppression rule: a pair exchanges unless both sides are
// executing the same joint plan.
bool exchange_allowed(const Agent& i, const Agent& j);

struct EventRow {
  int step = 0;
  int agent = 0;
  Mode mode = Mode::Searching;
  double x = 0.0, y = 0.0;
  int n_hat = 0;
  std::string tag;
};

struct TargetTally {
  int lifetime_steps = 0;
  int tracked_steps = 0;
};

// One deterministic simulation trial. Identical config + seed gives a
// bit-identical event log and metric series.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed);

  void step();
  void run();  // all horizon steps

  int time() const { return k_; }
  const WorldState& world() const { return world_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const std::vector<EventRow>& events() const { return events_; }

  const std::vector<double>& searched_series() const { return searched_; }
  const std::vector<double>& ospa_series() const { return ospa_; }
  const std::vector<TargetTally>& target_tallies() const { return tallies_; }

  std::string events_csv() const;
  std::string truth_csv() const;

 private:
  void coordinate_overlaps();
  void update_modes();
  void cooperate_search();
  void ensure_plan(Agent& ag);
  Vec2 choose_control(Agent& ag, RngStream& rng);
  void record_metrics();

  ScenarioConfig cfg_;
  MotionModel motion_;
  SearchGraph graph_;
  WorldState world_;
  std::vector<Agent> agents_;
  OverlapLedger ledger_;
  RngStream world_rng_;
  RngStream switch_rng_;
  std::vector<RngStream> agent_rngs_;
  int k_ = 0;

  std::vector<Mode> step_modes_;  // modes at step entry (pre-transition)

  std::vector<EventRow> events_;
  std::vector<double> searched_;
  std::vector<double> ospa_;
  std::vector<TargetTally> tallies_;
  std::string truth_rows_;
  std::vector<std::string> pending_tags_;
};

}  // namespace sat
