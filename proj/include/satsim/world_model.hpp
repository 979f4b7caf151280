#pragma once

#include <Eigen/Dense>
#include <vector>

#include "satsim/rng.hpp"
#include "satsim/types.hpp"

namespace sat {

// Single-target state: position/velocity in Cartesian coordinates plus a
// label distinguishing true targets (1) from virtual (grid) targets (0).
struct KinematicState {
  double px = 0.0;
  double vx = 0.0;
  double py = 0.0;
  double vy = 0.0;
  int label = 1;

  Vec2 pos() const { return {px, py}; }
};

// Near-constant-velocity dynamics with additive Gaussian process noise.
struct MotionModel {
  double T = 1.0;    // sampling interval (s)
  double ps = 0.99;  // per-step survival probability
  Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d q_chol = Eigen::Matrix4d::Zero();  // lower Cholesky of Q

  static MotionModel near_constant_velocity(double T, double ps);
};

struct Measurement {
  double range = 0.0;    // m, >= 0
  double bearing = 0.0;  // rad, in (-pi, pi]
};

// Square-footprint range/bearing sensor with range-dependent noise and
// Poisson clutter uniform (in position) over the surveillance area — the
// sensor's measurement space.
struct SensorModel {
  double a = 10.0;           // sensing-square side (m)
  double pd_max = 0.99;      // in-range detection probability
  double zeta0 = 1.0;        // range-noise intercept (m)
  double beta_zeta = 5e-5;   // range-noise slope (1/m)
  double phi0 = M_PI / 180;  // bearing-noise intercept (rad)
  double beta_phi = 1e-5;    // bearing-noise slope (rad/m)
  double lambda_c = 10.0;    // expected clutter per scan
  double clutter_area = 1e4; // position-space area of the clutter support (m²)

  double sigma_range(double r) const { return zeta0 + beta_zeta * r * r; }
  double sigma_bearing(double r) const { return phi0 + beta_phi * r; }

  // Spatial clutter density over the measurement space: the image of a
  // uniform position draw on the clutter support under the polar map.
  double clutter_density(const Measurement& z) const { return z.range / clutter_area; }
};

// Radial/angular control lattice around the current position (plus stay).
struct ControlModel {
  double delta_r = 2.0;  // radial step (m)
  int n_r = 2;           // radial levels
  int n_theta = 8;       // angular divisions
};

// Applies the motion model; virtual targets are static by definition.
KinematicState propagate_target(const KinematicState& x, const MotionModel& m,
                                RngStream* noise = nullptr);

// Deduplicated admissible positions reachable in one step (stay action first,
// then rings in (l1, l2) order).
std::vector<Vec2> admissible_controls(const Vec2& s, const ControlModel& c);

// Same, restricted to positions inside the surveillance rectangle.
std::vector<Vec2> admissible_controls(const Vec2& s, const ControlModel& c, const Rect& area);

// pd_max inside the closed sensing square, 0 outside. True targets only.
double detection_probability(const KinematicState& x, const Vec2& s, const SensorModel& sm);

// Indicator of the closed sensing square.
bool in_sensing_range(const Vec2& x, const Vec2& s, double a);

// Range/bearing observation of a true target; noiseless when `noise` is null.
Measurement measure(const KinematicState& x, const Vec2& s, const SensorModel& sm,
                    RngStream* noise = nullptr);

// Bivariate Gaussian measurement density with bearing residual wrapping.
double likelihood(const Measurement& z, const KinematicState& x, const Vec2& s,
                  const SensorModel& sm);

}  // namespace sat
