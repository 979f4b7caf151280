#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "satsim/overlap.hpp"
#include "satsim/rng.hpp"

using namespace sat;

namespace {

// Brute-force reference: minimum over all assignments of the smaller set
// into the larger one.
double ospa_brute(std::vector<Vec2> x, std::vector<Vec2> y, double c) {
  if (x.size() > y.size()) std::swap(x, y);
  const std::size_t m = x.size(), n = y.size();
  if (n == 0) return 0.0;
  if (m == 0) return c;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::max();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = std::min(c, distance(x[i], y[idx[i]]));
      s += d * d;
    }
    best = std::min(best, s);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return std::sqrt((best + double(n - m) * c * c) / double(n));
}

}  // namespace

TEST_CASE("ospa basics") {
  const double c = 50.0;
  SUBCASE("identical sets score zero") {
    const std::vector<Vec2> x{{1, 2}, {30, 40}};
    CHECK(ospa(x, x, c) == doctest::Approx(0.0));
  }
  SUBCASE("singleton distance") {
    CHECK(ospa({{0, 0}}, {{3, 4}}, c) == doctest::Approx(5.0));
  }
  SUBCASE("cardinality penalty") {
    // One matched pair at distance zero plus one unmatched target.
    CHECK(ospa({{0, 0}}, {{0, 0}, {20, 20}}, c) == doctest::Approx(std::sqrt(1250.0)));
  }
  SUBCASE("cutoff saturates large distances") {
    CHECK(ospa({{0, 0}}, {{1000, 1000}}, c) == doctest::Approx(c));
  }
  SUBCASE("empty sets") {
    CHECK(ospa({}, {}, c) == 0.0);
    CHECK(ospa({}, {{5, 5}}, c) == doctest::Approx(c));
    CHECK(ospa({{5, 5}}, {}, c) == doctest::Approx(c));
  }
  SUBCASE("invalid cutoff") { CHECK_THROWS(ospa({}, {}, 0.0)); }
}

TEST_CASE("ospa matches the permutation oracle on random sets") {
  RngStream rng(17, "ospa");
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = rng.pick(6);  // up to 5
    const std::size_t n = rng.pick(6);
    std::vector<Vec2> x, y;
    for (std::size_t i = 0; i < m; ++i) x.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    for (std::size_t i = 0; i < n; ++i) y.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    const double c = rng.uniform(5.0, 80.0);
    CHECK(ospa(x, y, c) == doctest::Approx(ospa_brute(x, y, c)).epsilon(1e-9));

    // Symmetry and nonnegativity.
    CHECK(ospa(x, y, c) == doctest::Approx(ospa(y, x, c)));
    CHECK(ospa(x, y, c) >= 0.0);
    CHECK(ospa(x, y, c) <= c + 1e-12);
  }
}

TEST_CASE("ospa satisfies the triangle inequality") {
  RngStream rng(18, "ospa-tri");
  for (int t = 0; t < 100; ++t) {
    std::vector<Vec2> x, y, z;
    for (std::size_t i = 0; i < 1 + rng.pick(4); ++i)
      x.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    for (std::size_t i = 0; i < 1 + rng.pick(4); ++i)
      y.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    for (std::size_t i = 0; i < 1 + rng.pick(4); ++i)
      z.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    CHECK(ospa(x, z, 50.0) <= ospa(x, y, 50.0) + ospa(y, z, 50.0) + 1e-9);
  }
}

TEST_CASE("overlap ledger window mechanics") {
  const double a = 10.0;
  const std::vector<Vec2> est{{50, 50}};

  SUBCASE("the window must fill before a decision is possible") {
    OverlapLedger led;
    RngStream rng(19, "switch");
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    CHECK_FALSE(led.window_full(0, 1));
    CHECK(led.cumulative(0, 1) == std::numeric_limits<double>::infinity());
    CHECK_FALSE(led.decide_switch(0, 1, rng).has_value());
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    CHECK(led.window_full(0, 1));
    CHECK(led.cumulative(0, 1) == doctest::Approx(0.0));
  }

  SUBCASE("matching estimates over a full window force a switch") {
    OverlapLedger led;
    RngStream rng(19, "switch");
    for (int k = 0; k < 3; ++k) led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    const auto who = led.decide_switch(0, 1, rng);
    REQUIRE(who.has_value());
    CHECK((*who == 0 || *who == 1));
    // Decision consumes the window.
    CHECK_FALSE(led.window_full(0, 1));
  }

  SUBCASE("disjoint sensing squares poison the window") {
    OverlapLedger led;
    RngStream rng(19, "switch");
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    led.step(0, 1, est, est, {50, 50}, {90, 90}, a);
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    CHECK(led.window_full(0, 1));
    CHECK(led.cumulative(0, 1) == std::numeric_limits<double>::infinity());
    CHECK_FALSE(led.decide_switch(0, 1, rng).has_value());
  }

  SUBCASE("an empty estimate set poisons the window") {
    OverlapLedger led;
    RngStream rng(19, "switch");
    led.step(0, 1, est, {}, {50, 50}, {52, 50}, a);
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
    CHECK(led.cumulative(0, 1) == std::numeric_limits<double>::infinity());
  }

  SUBCASE("large disagreement stays above the threshold") {
    OverlapLedger led;  // threshold 0.9
    RngStream rng(19, "switch");
    const std::vector<Vec2> far{{58, 50}};
    for (int k = 0; k < 3; ++k) led.step(0, 1, est, far, {50, 50}, {52, 50}, a);
    CHECK(led.cumulative(0, 1) == doctest::Approx(8.0));
    CHECK_FALSE(led.decide_switch(0, 1, rng).has_value());
    // Not consumed: still eligible once the scores drop.
    CHECK(led.window_full(0, 1));
  }

  SUBCASE("the switch decision is reproducible for a fixed stream") {
    auto run = [&] {
      OverlapLedger led;
      RngStream rng(77, "switch");
      for (int k = 0; k < 3; ++k) led.step(2, 5, est, est, {50, 50}, {52, 50}, a);
      return *led.decide_switch(2, 5, rng);
    };
    CHECK(run() == run());
  }

  SUBCASE("reset clears the pair independently") {
    OverlapLedger led;
    for (int k = 0; k < 3; ++k) {
      led.step(0, 1, est, est, {50, 50}, {52, 50}, a);
      led.step(0, 2, est, est, {50, 50}, {52, 50}, a);
    }
    led.reset(0, 1);
    CHECK_FALSE(led.window_full(0, 1));
    CHECK(led.window_full(0, 2));
  }
}
