#include "satsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "satsim/track_controller.hpp"

namespace sat {

namespace {

constexpr int kNoDeath = std::numeric_limits<int>::max();

// Square of positions reachable while still sensing: current square inflated
// by the maximum one-step displacement.
Rect reach_region(const Vec2& s, const ScenarioConfig& cfg) {
  const double reach = cfg.sensor.a / 2 + cfg.control.n_r * cfg.control.delta_r;
  return {s.x - reach, s.y - reach, s.x + reach, s.y + reach};
}

}  // namespace

std::vector<Vec2> WorldState::alive_positions() const {
  std::vector<Vec2> out;
  for (const TargetTruth& t : targets)
    if (t.alive(k)) out.push_back(t.x.pos());
  return out;
}

WorldState make_world(const ScenarioConfig& cfg, RngStream& world_rng) {
  WorldState w;
  w.area = cfg.area();
  const TargetScript& ts = cfg.targets;
  for (int i = 0; i < ts.count; ++i) {
    TargetTruth t;
    t.id = i;
    t.birth = ts.birth_window > 0
                  ? static_cast<int>(world_rng.uniform() * (ts.birth_window + 1))
                  : 0;
    if (ts.lifetime_mean > 0.0) {
      // Geometric lifetime with the scripted mean.
      const double p = 1.0 / ts.lifetime_mean;
      const double u = world_rng.uniform();
      const int life = std::max(1, static_cast<int>(std::ceil(std::log1p(-u) / std::log1p(-p))));
      t.death = t.birth + life;
    } else {
      t.death = kNoDeath;  // survival draws each step
    }
    if (ts.spawn == TargetScript::Spawn::Center) {
      t.x.px = w.area.center().x;
      t.x.py = w.area.center().y;
    } else {
      t.x.px = world_rng.uniform(w.area.x0, w.area.x1);
      t.x.py = world_rng.uniform(w.area.y0, w.area.y1);
    }
    const double heading = world_rng.uniform(0.0, 2.0 * M_PI);
    const double speed = ts.speed * std::sqrt(2.0);  // `speed` per axis on average
    t.x.vx = speed * std::cos(heading);
    t.x.vy = speed * std::sin(heading);
    t.x.label = 1;
    w.targets.push_back(t);
  }
  return w;
}

void step_world(WorldState& w, const ScenarioConfig& cfg, const MotionModel& m,
                RngStream& world_rng) {
  const int next = w.k + 1;
  for (TargetTruth& t : w.targets) {
    if (!t.alive(w.k)) continue;
    if (t.death == kNoDeath && world_rng.uniform() > m.ps) {
      t.death = next;
      continue;
    }
    if (!t.alive(next)) continue;  // scripted death
    t.x = propagate_target(t.x, m, &world_rng);
    if (!w.area.contains(t.x.pos())) t.death = next;  // left the surveillance area
  }
  w.k = next;
}

std::vector<Measurement> generate_measurements(const WorldState& w, const Vec2& s,
                                               const SensorModel& sm, RngStream& rng) {
  std::vector<Measurement> out;
  for (const TargetTruth& t : w.targets) {
    if (!t.alive(w.k)) continue;
    if (!in_sensing_range(t.x.pos(), s, sm.a)) continue;
    if (rng.uniform() < sm.pd_max) out.push_back(measure(t.x, s, sm, &rng));
  }
  const int clutter = rng.poisson(sm.lambda_c);
  for (int i = 0; i < clutter; ++i) {
    KinematicState fake;
    fake.px = rng.uniform(w.area.x0, w.area.x1);
    fake.py = rng.uniform(w.area.y0, w.area.y1);
    out.push_back(measure(fake, s, sm, nullptr));
  }
  return out;
}

std::vector<std::pair<int, int>> communication_pairs(const std::vector<Vec2>& positions,
                                                     double comm_range) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if (distance(positions[i], positions[j]) <= comm_range)
        out.push_back({static_cast<int>(i), static_cast<int>(j)});
  return out;
}

bool exchange_allowed(const Agent& i, const Agent& j) {
  if (i.in_joint_plan && i.cohort.count(j.id)) return false;
  if (j.in_joint_plan && j.cohort.count(i.id)) return false;
  return true;
}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      motion_(cfg.motion()),
      graph_(SearchGrid(cfg.area(), cfg.grid_cell, cfg.decay_j, cfg.beta, cfg.eps0),
             cfg.connectivity),
      ledger_(cfg.overlap_window, cfg.overlap_cutoff, cfg.q_threshold),
      world_rng_(seed, "world"),
      switch_rng_(seed, "switch") {
  cfg_.validate();
  cfg_.sensor.clutter_area = cfg_.area_width * cfg_.area_height;
  world_ = make_world(cfg_, world_rng_);
  const SearchGrid proto(cfg_.area(), cfg_.grid_cell, cfg_.decay_j, cfg_.beta, cfg_.eps0);
  for (int i = 0; i < cfg_.n_agents; ++i) {
    Agent ag(proto);
    ag.id = i;
    RngStream init(seed, "agent-init", static_cast<std::uint64_t>(i));
    ag.pos = {init.uniform(0.0, cfg_.area_width), init.uniform(0.0, cfg_.area_height)};
    ag.prev_pos = ag.pos;
    agents_.push_back(std::move(ag));
    agent_rngs_.emplace_back(seed, "agent", static_cast<std::uint64_t>(i));
  }
  pending_tags_.assign(agents_.size(), "");
  if (cfg_.targets.count > 0) tallies_.assign(cfg_.targets.count, {});
}

void Simulation::ensure_plan(Agent& ag) {
  const std::vector<int> vbar = ag.grid.unvisited_nodes();
  bool replan = ag.plan_cursor >= ag.plan.nodes.size();
  if (!replan && ag.plan_vbar_size > 0) {
    const double change =
        std::abs(static_cast<double>(vbar.size()) - static_cast<double>(ag.plan_vbar_size)) /
        static_cast<double>(ag.plan_vbar_size);
    if (change > cfg_.replan_fraction) replan = true;
  }
  if (!replan) return;
  ag.plan = greedy_path(graph_, vbar, graph_.node_at(ag.pos));
  ag.plan.agent = ag.id;
  ag.plan_cursor = 0;
  ag.plan_vbar_size = vbar.size();
  ag.in_joint_plan = false;
  ag.cohort.clear();
}

void Simulation::coordinate_overlaps() {
  std::vector<Vec2> positions;
  for (const Agent& ag : agents_) positions.push_back(ag.pos);
  const auto pairs = communication_pairs(positions, cfg_.comm_range);
  std::vector<bool> coordinated(agents_.size() * agents_.size(), false);
  for (auto [i, j] : pairs) {
    Agent& a = agents_[i];
    Agent& b = agents_[j];
    if (a.mode != Mode::Tracking || b.mode != Mode::Tracking) continue;
    coordinated[static_cast<std::size_t>(i) * agents_.size() + j] = true;
    std::vector<Vec2> xi, xj;
    for (const KinematicState& s : a.est_post.states) xi.push_back(s.pos());
    for (const KinematicState& s : b.est_post.states) xj.push_back(s.pos());
    ledger_.step(i, j, xi, xj, a.pos, b.pos, cfg_.sensor.a);
    if (const auto sw = ledger_.decide_switch(i, j, switch_rng_)) {
      Agent& loser = agents_[*sw];
      loser.mode = Mode::Searching;
      loser.lost_steps = 0;
      loser.plan_cursor = loser.plan.nodes.size();  // force a fresh greedy plan
      ensure_plan(loser);
      pending_tags_[*sw] = "to_searching_switch";
    }
  }
  // Pairs not coordinated this step lose their window (entries must be
  // consecutive overlap steps).
  for (std::size_t i = 0; i < agents_.size(); ++i)
    for (std::size_t j = i + 1; j < agents_.size(); ++j)
      if (!coordinated[i * agents_.size() + j])
        ledger_.reset(static_cast<int>(i), static_cast<int>(j));
}

void Simulation::update_modes() {
  for (Agent& ag : agents_) {
    if (ag.mode == Mode::Searching) {
      if (ag.est_post.n_hat >= 1) {
        ag.mode = Mode::Tracking;
        ag.lost_steps = 0;
        ag.in_joint_plan = false;
        ag.cohort.clear();
        pending_tags_[ag.id] = "to_tracking";
      }
    } else {
      ag.lost_steps = ag.est_post.n_hat == 0 ? ag.lost_steps + 1 : 0;
      if (ag.lost_steps >= cfg_.h_lost) {
        ag.mode = Mode::Searching;
        ag.lost_steps = 0;
        ag.plan_cursor = ag.plan.nodes.size();
        ensure_plan(ag);
        pending_tags_[ag.id] = "to_searching_lost";
      }
    }
  }
}

void Simulation::cooperate_search() {
  if (cfg_.random_search) return;  // baseline: no communication, no planning
  std::vector<Vec2> positions;
  for (const Agent& ag : agents_) positions.push_back(ag.pos);
  const auto pairs = communication_pairs(positions, cfg_.comm_range);

  // Connected components over searching agents whose exchange is allowed.
  const int n = static_cast<int>(agents_.size());
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int v) {
    return comp[v] == v ? v : comp[v] = find(comp[v]);
  };
  for (auto [i, j] : pairs) {
    if (agents_[i].mode != Mode::Searching || agents_[j].mode != Mode::Searching) continue;
    if (!exchange_allowed(agents_[i], agents_[j])) continue;
    comp[find(i)] = find(j);
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i)
    if (agents_[i].mode == Mode::Searching) groups[find(i)].push_back(i);

  for (const std::vector<int>& g : groups) {
    if (g.size() < 2) continue;
    SearchGrid fused = agents_[g[0]].grid;
    for (std::size_t i = 1; i < g.size(); ++i) fused = fuse(fused, agents_[g[i]].grid);
    const std::vector<int> vbar = fused.unvisited_nodes();
    std::vector<int> starts;
    for (int id : g) starts.push_back(graph_.node_at(agents_[id].pos));
    const JointPlanResult joint = joint_plan(graph_, vbar, starts);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Agent& ag = agents_[g[i]];
      ag.grid = fused;
      ag.plan = joint.plans[i];
      ag.plan.agent = ag.id;
      ag.plan_cursor = 0;
      ag.plan_vbar_size = vbar.size();
      ag.in_joint_plan = true;
      ag.cohort.clear();
      for (int id : g)
        if (id != ag.id) ag.cohort.insert(id);
      if (pending_tags_[ag.id].empty()) pending_tags_[ag.id] = "joint_plan";
    }
  }
}

Vec2 Simulation::choose_control(Agent& ag, RngStream& rng) {
  const std::vector<Vec2> controls =
      admissible_controls(ag.pos, cfg_.control, cfg_.area());
  if (ag.mode == Mode::Tracking) {
    // The posterior intensity stands in for the one-step prediction: the
    // measurement update has already suppressed the diffuse birth mass, so the
    // predicted measurement set contains only confirmed clusters.
    const int idx = select_track_control(ag.phd, controls, cfg_.sensor, cfg_.alpha,
                                         reach_region(ag.pos, cfg_), cfg_.kmeans_restarts);
    return controls[idx];
  }
  if (cfg_.random_search) {
    // Random baseline: uniform among controls that reduce the distance to
    // the nearest unvisited cell.
    const std::vector<int> vbar = ag.grid.unvisited_nodes();
    if (!vbar.empty()) {
      double best = std::numeric_limits<double>::max();
      Vec2 nearest;
      for (int v : vbar) {
        const Vec2 c = ag.grid.cell_center(v);
        const double d = distance(ag.pos, c);
        if (d < best) {
          best = d;
          nearest = c;
        }
      }
      std::vector<Vec2> closing;
      for (const Vec2& u : controls)
        if (distance(u, nearest) < best - 1e-9) closing.push_back(u);
      if (!closing.empty()) return closing[rng.pick(closing.size())];
    }
    return controls[rng.pick(controls.size())];
  }
  // Planned search: head for the next not-yet-visited plan node.
  ensure_plan(ag);
  while (ag.plan_cursor < ag.plan.nodes.size() &&
         in_sensing_range(graph_.node_center(ag.plan.nodes[ag.plan_cursor]), ag.pos,
                          cfg_.sensor.a)) {
    ++ag.plan_cursor;
  }
  if (ag.plan_cursor >= ag.plan.nodes.size()) {
    ag.in_joint_plan = false;
    ensure_plan(ag);
    while (ag.plan_cursor < ag.plan.nodes.size() &&
           in_sensing_range(graph_.node_center(ag.plan.nodes[ag.plan_cursor]), ag.pos,
                            cfg_.sensor.a)) {
      ++ag.plan_cursor;
    }
  }
  if (ag.plan_cursor >= ag.plan.nodes.size()) {
    // Fully searched: patrol toward the stalest cell (lowest search value),
    // which is the next to fall below the revisit threshold.
    int stalest = 0;
    for (int c = 1; c < ag.grid.size(); ++c)
      if (ag.grid.search_value(c) < ag.grid.search_value(stalest)) stalest = c;
    const Vec2 goal = ag.grid.cell_center(stalest);
    return controls[search_control(controls, goal)];
  }
  const Vec2 goal = graph_.node_center(ag.plan.nodes[ag.plan_cursor]);
  return controls[search_control(controls, goal)];
}

void Simulation::record_metrics() {
  // Searched fraction over the max-fusion of all agents' grids.
  SearchGrid fused = agents_[0].grid;
  for (std::size_t i = 1; i < agents_.size(); ++i) fused = fuse(fused, agents_[i].grid);
  int searched = 0;
  for (int c = 0; c < fused.size(); ++c)
    if (fused.search_value(c) >= cfg_.theta_s) ++searched;
  searched_.push_back(static_cast<double>(searched) / fused.size());

  // OSPA between the union of tracking estimates and the ground truth. An
  // agent reports estimates once it is established in tracking mode, i.e.
  // from the step after the switch: a detection made while searching becomes
  // a reported track only if it survives into the next scan.
  std::vector<Vec2> estimates;
  for (const Agent& ag : agents_)
    if (step_modes_[ag.id] == Mode::Tracking)
      for (const KinematicState& s : ag.est_post.states) estimates.push_back(s.pos());
  const std::vector<Vec2> truth = world_.alive_positions();
  ospa_.push_back(ospa(estimates, truth, cfg_.ospa_cutoff));

  // Per-target tracked flags.
  for (const TargetTruth& t : world_.targets) {
    if (!t.alive(world_.k)) continue;
    TargetTally& tally = tallies_[t.id];
    ++tally.lifetime_steps;
    bool tracked = false;
    for (const Agent& ag : agents_) {
      if (step_modes_[ag.id] != Mode::Tracking) continue;
      for (const KinematicState& s : ag.est_post.states) {
        if (distance(s.pos(), t.x.pos()) <= cfg_.eps_track) {
          tracked = true;
          break;
        }
      }
      if (tracked) break;
    }
    if (tracked) ++tally.tracked_steps;
  }

  // Event and truth rows.
  for (const Agent& ag : agents_) {
    events_.push_back({k_, ag.id, ag.mode, ag.pos.x, ag.pos.y, ag.est_post.n_hat,
                       pending_tags_[ag.id]});
    pending_tags_[ag.id].clear();
  }
  char buf[128];
  for (const TargetTruth& t : world_.targets) {
    if (t.birth > world_.k) continue;
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%d\n", k_, t.id, t.x.px, t.x.py,
                  t.alive(world_.k) ? 1 : 0);
    truth_rows_ += buf;
  }
}

void Simulation::step() {
  // Operating mode for this step: transitions decided below take effect on
  // the next step's control and reporting.
  step_modes_.clear();
  for (const Agent& ag : agents_) step_modes_.push_back(ag.mode);

  // 1. Per-agent SAT-density predict, sense, update (all against the same
  //    world state).
  for (Agent& ag : agents_) {
    RngStream& rng = agent_rngs_[ag.id];
    const Rect birth_sq = sensing_square(ag.pos, cfg_.sensor.a);
    ag.phd = phd_predict(ag.phd, motion_, birth_sq, cfg_.birth, rng);
    ag.grid = search_predict(ag.grid, ag.prev_pos, cfg_.sensor.a);
    const std::vector<Measurement> z = generate_measurements(world_, ag.pos, cfg_.sensor, rng);
    phd_update_inplace(ag.phd, z, ag.pos, cfg_.sensor);
    ag.grid = search_update(ag.grid, ag.pos, cfg_.sensor.a);
    ag.phd = resample(ag.phd, cfg_.rho, rng);
    ag.est_post = phd_estimate(ag.phd, sensing_square(ag.pos, cfg_.sensor.a),
                               cfg_.kmeans_restarts);
  }

  // 2. Mode logic, estimate-driven part: searching->tracking promotion and
  //    the lost-track demotion counter.
  update_modes();

  // 3. Mode logic, coordination part: tracking-overlap detection and random
  //    switch resolution. Runs after the promotions so that a pair converging
  //    on the same target starts accruing overlap scores immediately.
  if (cfg_.overlap_detection) coordinate_overlaps();

  // 4. Opportunistic search cooperation (fused grids + joint plans).
  cooperate_search();

  // 5. Metrics reflect the post-update state at this step.
  record_metrics();

  // 6. All agents move simultaneously, then the world advances.
  std::vector<Vec2> next(agents_.size());
  for (Agent& ag : agents_) next[ag.id] = choose_control(ag, agent_rngs_[ag.id]);
  for (Agent& ag : agents_) {
    ag.prev_pos = ag.pos;
    ag.pos = next[ag.id];
  }
  step_world(world_, cfg_, motion_, world_rng_);
  ++k_;
}

void Simulation::run() {
  for (int i = 0; i < cfg_.horizon; ++i) step();
}

std::string Simulation::events_csv() const {
  std::string out = "step,agent_id,mode,x,y,n_hat,event_tag\n";
  char buf[160];
  for (const EventRow& e : events_) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.9g,%.9g,%d,%s\n", e.step, e.agent,
                  e.mode == Mode::Tracking ? "tracking" : "searching", e.x, e.y, e.n_hat,
                  e.tag.c_str());
    out += buf;
  }
  return out;
}

std::string Simulation::truth_csv() const {
  return "step,target_id,x,y,alive\n" + truth_rows_;
}

}  // namespace sat
