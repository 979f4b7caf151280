#include <doctest.h>

#include <cmath>
#include <set>

#include "satsim/sim_engine.hpp"

using namespace sat;

namespace {

ScenarioConfig small_cfg() {
  ScenarioConfig c;
  c.rho = 200.0;
  c.birth.particles_per_step = 100;
  c.horizon = 30;
  c.n_agents = 2;
  return c;
}

}  // namespace

TEST_CASE("world scripting") {
  ScenarioConfig cfg;
  SUBCASE("no targets") {
    cfg.targets.count = 0;
    RngStream rng(1, "world");
    const WorldState w = make_world(cfg, rng);
    CHECK(w.targets.empty());
    CHECK(w.alive_positions().empty());
  }
  SUBCASE("center spawn with immediate birth") {
    cfg.targets.count = 10;
    cfg.targets.spawn = TargetScript::Spawn::Center;
    cfg.targets.birth_window = 0;
    cfg.targets.lifetime_mean = 60.0;
    RngStream rng(2, "world");
    const WorldState w = make_world(cfg, rng);
    REQUIRE(w.targets.size() == 10);
    for (const TargetTruth& t : w.targets) {
      CHECK(t.birth == 0);
      CHECK(t.x.px == doctest::Approx(50.0));
      CHECK(t.x.py == doctest::Approx(50.0));
      CHECK(t.alive(0));
      CHECK_FALSE(t.alive(t.death));
      CHECK(t.death > t.birth);
    }
  }
  SUBCASE("birth steps fall inside the window") {
    cfg.targets.count = 200;
    cfg.targets.birth_window = 60;
    RngStream rng(3, "world");
    const WorldState w = make_world(cfg, rng);
    for (const TargetTruth& t : w.targets) {
      CHECK(t.birth >= 0);
      CHECK(t.birth <= 60);
    }
  }
  SUBCASE("scripted lifetimes have the requested mean (MC oracle)") {
    cfg.targets.count = 2000;
    cfg.targets.lifetime_mean = 60.0;
    RngStream rng(4, "world");
    const WorldState w = make_world(cfg, rng);
    double acc = 0.0;
    for (const TargetTruth& t : w.targets) acc += t.death - t.birth;
    // Geometric(1/60): std ~ 59.5, so 4 sigma / sqrt(2000) ~ 5.3.
    CHECK(std::abs(acc / 2000 - 60.0) < 5.4);
  }
  SUBCASE("uniform spawn stays inside the area") {
    cfg.targets.count = 500;
    RngStream rng(5, "world");
    const WorldState w = make_world(cfg, rng);
    for (const TargetTruth& t : w.targets) CHECK(w.area.contains(t.x.pos()));
  }
}

TEST_CASE("unscripted survival matches the per-step probability") {
  ScenarioConfig cfg;
  cfg.targets.count = 10000;
  cfg.targets.spawn = TargetScript::Spawn::Center;
  cfg.targets.speed = 0.0;
  cfg.targets.lifetime_mean = 0.0;  // survival draws
  RngStream rng(6, "world");
  WorldState w = make_world(cfg, rng);
  step_world(w, cfg, cfg.motion(), rng);
  int alive = 0;
  for (const TargetTruth& t : w.targets)
    if (t.alive(w.k)) ++alive;
  // Binomial(10000, 0.99): 4 sigma ~ 40.
  CHECK(std::abs(alive - 9900) < 45);
}

TEST_CASE("targets die when they leave the surveillance area") {
  ScenarioConfig cfg;
  cfg.targets.count = 1;
  RngStream rng(7, "world");
  WorldState w = make_world(cfg, rng);
  w.targets[0].x = {99.5, 50.0, 50.0, 0.0, 1};  // sprinting east
  w.targets[0].death = 1000;
  step_world(w, cfg, cfg.motion(), rng);
  CHECK_FALSE(w.targets[0].alive(w.k));
}

TEST_CASE("measurement generation") {
  ScenarioConfig cfg;
  cfg.targets.count = 1;
  cfg.targets.spawn = TargetScript::Spawn::Center;
  RngStream wr(8, "world");
  WorldState w = make_world(cfg, wr);

  SUBCASE("clutter count is Poisson with the configured mean") {
    SensorModel sm;  // lambda_c = 10
    RngStream rng(9, "meas");
    const Vec2 s{10, 10};  // far from the target
    double acc = 0.0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) acc += double(generate_measurements(w, s, sm, rng).size());
    CHECK(std::abs(acc / trials - 10.0) < 0.6);
  }
  SUBCASE("in-range target is detected at pd_max") {
    SensorModel sm;
    sm.lambda_c = 0.0;
    RngStream rng(10, "meas");
    const Vec2 s{51, 51};  // target at (50,50) is inside the square
    int hits = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t)
      hits += generate_measurements(w, s, sm, rng).empty() ? 0 : 1;
    CHECK(std::abs(hits / double(trials) - 0.99) < 0.012);
  }
  SUBCASE("out-of-range target is never detected") {
    SensorModel sm;
    sm.lambda_c = 0.0;
    RngStream rng(11, "meas");
    for (int t = 0; t < 100; ++t)
      CHECK(generate_measurements(w, {80, 80}, sm, rng).empty());
  }
}

TEST_CASE("expected cardinality over a stationary three-target scene") {
  // Full filter loop against a fixed world: three well-separated targets
  // inside the square, clutter at the configured rate. The mean rounded
  // in-square mass should settle near the true count.
  ScenarioConfig cfg;
  cfg.targets.count = 0;
  WorldState w;
  w.area = cfg.area();
  for (int i = 0; i < 3; ++i) {
    TargetTruth t;
    t.id = i;
    t.death = 1 << 20;
    w.targets.push_back(t);
  }
  w.targets[0].x = {47, 0, 47, 0, 1};
  w.targets[1].x = {53, 0, 50, 0, 1};
  w.targets[2].x = {50, 0, 53, 0, 1};

  const Vec2 s{50, 50};
  const Rect square = sensing_square(s, cfg.sensor.a);
  const MotionModel m = cfg.motion();
  BirthModel birth;
  birth.particles_per_step = 100;

  double acc = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(100 + t, "cardinality");
    ParticlePhd phd;
    for (int k = 0; k < 15; ++k) {
      phd = phd_predict(phd, m, square, birth, rng);
      const std::vector<Measurement> z = generate_measurements(w, s, cfg.sensor, rng);
      phd_update_inplace(phd, z, s, cfg.sensor);
      phd = resample(phd, 200.0, rng);
    }
    acc += phd_estimate(phd, square, 1).n_hat;
  }
  const double mean = acc / trials;
  CHECK(mean > 2.5);
  CHECK(mean < 3.5);
}

TEST_CASE("communication pairs respect the range cutoff") {
  const std::vector<Vec2> pos{{0, 0}, {49.9, 0}, {0, 50.1}};
  const auto pairs = communication_pairs(pos, 50.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("exchange suppression inside a joint-plan cohort") {
  SearchGrid g({0, 0, 100, 100}, 10, 0.999, 0.5);
  Agent a(g), b(g), c(g);
  a.id = 0;
  b.id = 1;
  c.id = 2;
  CHECK(exchange_allowed(a, b));  // no plans at all
  a.in_joint_plan = true;
  a.cohort = {1};
  CHECK_FALSE(exchange_allowed(a, b));  // same cohort, plan still running
  CHECK(exchange_allowed(a, c));        // outsider is fine
  a.in_joint_plan = false;
  CHECK(exchange_allowed(a, b));  // plan finished
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const ScenarioConfig cfg = [] {
    ScenarioConfig c = small_cfg();
    c.targets.count = 3;
    c.targets.lifetime_mean = 40.0;
    return c;
  }();
  Simulation s1(cfg, 42), s2(cfg, 42);
  s1.run();
  s2.run();
  CHECK(s1.events_csv() == s2.events_csv());
  CHECK(s1.truth_csv() == s2.truth_csv());
  REQUIRE(s1.ospa_series().size() == std::size_t(cfg.horizon));
  for (std::size_t i = 0; i < s1.ospa_series().size(); ++i) {
    CHECK(s1.ospa_series()[i] == s2.ospa_series()[i]);
    CHECK(s1.searched_series()[i] == s2.searched_series()[i]);
  }

  SUBCASE("a different seed gives a different run") {
    Simulation s3(cfg, 43);
    s3.run();
    CHECK(s3.events_csv() != s1.events_csv());
  }
}

TEST_CASE("the world realization does not depend on the agent count") {
  ScenarioConfig cfg = small_cfg();
  cfg.targets.count = 5;
  cfg.targets.lifetime_mean = 40.0;
  ScenarioConfig cfg4 = cfg;
  cfg4.n_agents = 4;
  Simulation s2(cfg, 7), s4(cfg4, 7);
  s2.run();
  s4.run();
  CHECK(s2.truth_csv() == s4.truth_csv());
}

TEST_CASE("agents never leave the surveillance area") {
  ScenarioConfig cfg = small_cfg();
  cfg.targets.count = 4;
  cfg.targets.lifetime_mean = 50.0;
  Simulation sim(cfg, 11);
  for (int k = 0; k < cfg.horizon; ++k) {
    sim.step();
    for (const Agent& ag : sim.agents()) CHECK(cfg.area().contains(ag.pos));
  }
}

TEST_CASE("searched fraction is monotone-ish and reaches coverage without targets") {
  ScenarioConfig cfg = small_cfg();
  cfg.targets.count = 0;
  cfg.birth.rate = 0.0;  // nothing to believe in: agents stay in search mode
  cfg.horizon = 80;
  cfg.n_agents = 3;
  Simulation sim(cfg, 13);
  sim.run();
  for (const Agent& ag : sim.agents()) CHECK(ag.mode == Mode::Searching);
  // Three planned searchers cover most of a 10x10 grid in 80 steps.
  CHECK(sim.searched_series().back() > 0.7);
  CHECK(sim.searched_series().front() < sim.searched_series().back());

  SUBCASE("with the filter birth model on, false alarms only slow search down") {
    ScenarioConfig full = cfg;
    full.birth.rate = 3.0;  // default filter birth; occasional clutter blips
    full.horizon = 100;
    Simulation noisy(full, 13);
    noisy.run();
    CHECK(noisy.searched_series().back() > 0.5);
  }
}

TEST_CASE("event log structure") {
  ScenarioConfig cfg = small_cfg();
  cfg.targets.count = 2;
  cfg.targets.lifetime_mean = 40.0;
  Simulation sim(cfg, 17);
  sim.run();
  REQUIRE(sim.events().size() == std::size_t(cfg.horizon * cfg.n_agents));
  const std::set<std::string> known{"",
                                    "to_tracking",
                                    "to_searching_lost",
                                    "to_searching_switch",
                                    "joint_plan"};
  int step = 0, agent = 0;
  for (const EventRow& e : sim.events()) {
    CHECK(e.step == step);
    CHECK(e.agent == agent);
    CHECK(known.count(e.tag) == 1);
    if (++agent == cfg.n_agents) {
      agent = 0;
      ++step;
    }
  }
  const std::string csv = sim.events_csv();
  CHECK(csv.rfind("step,agent_id,mode,x,y,n_hat,event_tag\n", 0) == 0);
}

TEST_CASE("a searching agent switches to tracking when mass accumulates") {
  ScenarioConfig cfg = small_cfg();
  cfg.n_agents = 1;
  cfg.horizon = 80;
  cfg.targets.count = 4;
  cfg.targets.spawn = TargetScript::Spawn::Center;
  cfg.targets.speed = 0.2;
  cfg.targets.lifetime_mean = 500.0;
  Simulation sim(cfg, 19);
  sim.run();
  bool tracked = false;
  for (const EventRow& e : sim.events()) {
    if (e.tag == "to_tracking") {
      tracked = true;
      CHECK(e.mode == Mode::Tracking);
    }
  }
  CHECK(tracked);
}

TEST_CASE("random-search baseline runs and never plans jointly") {
  ScenarioConfig cfg = small_cfg();
  cfg.random_search = true;
  cfg.targets.count = 3;
  cfg.targets.lifetime_mean = 40.0;
  Simulation sim(cfg, 23);
  sim.run();
  for (const EventRow& e : sim.events()) CHECK(e.tag != "joint_plan");
}
