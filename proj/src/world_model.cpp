#include "satsim/world_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace sat {

MotionModel MotionModel::near_constant_velocity(double T, double ps) {
  MotionModel m;
  m.T = T;
  m.ps = ps;
  m.F << 1, T, 0, 0,
         0, 1, 0, 0,
         0, 0, 1, T,
         0, 0, 0, 1;
  m.Q << T / 3, T / 2, 0, 0,
         T / 2, T,     0, 0,
         0, 0, T / 3, T / 2,
         0, 0, T / 2, T;
  m.q_chol = m.Q.llt().matrixL();
  return m;
}

KinematicState propagate_target(const KinematicState& x, const MotionModel& m, RngStream* noise) {
  if (x.label == 0) return x;  // virtual targets are static
  Eigen::Vector4d v(x.px, x.vx, x.py, x.vy);
  Eigen::Vector4d next = m.F * v;
  if (noise) {
    Eigen::Vector4d w(noise->normal(), noise->normal(), noise->normal(), noise->normal());
    next += m.q_chol * w;
  }
  return {next(0), next(1), next(2), next(3), x.label};
}

std::vector<Vec2> admissible_controls(const Vec2& s, const ControlModel& c) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(c.n_r) * c.n_theta + 1);
  const double dtheta = c.n_theta > 0 ? 2.0 * M_PI / c.n_theta : 0.0;
  const double tol = 1e-6;
  for (int l1 = 0; l1 <= c.n_r; ++l1) {
    for (int l2 = 0; l2 <= c.n_theta; ++l2) {
      Vec2 p{s.x + l1 * c.delta_r * std::cos(l2 * dtheta),
             s.y + l1 * c.delta_r * std::sin(l2 * dtheta)};
      bool dup = false;
      for (const Vec2& q : out) {
        if (std::abs(p.x - q.x) < tol && std::abs(p.y - q.y) < tol) {
          dup = true;
          break;
        }
      }
      if (!dup) out.push_back(p);
    }
  }
  return out;
}

std::vector<Vec2> admissible_controls(const Vec2& s, const ControlModel& c, const Rect& area) {
  std::vector<Vec2> all = admissible_controls(s, c);
  std::vector<Vec2> out;
  out.reserve(all.size());
  for (const Vec2& p : all)
    if (area.contains(p)) out.push_back(p);
  return out;
}

bool in_sensing_range(const Vec2& x, const Vec2& s, double a) {
  return std::max(std::abs(x.x - s.x), std::abs(x.y - s.y)) <= a / 2;
}

double detection_probability(const KinematicState& x, const Vec2& s, const SensorModel& sm) {
  if (x.label != 1)
    throw std::invalid_argument("detection_probability: virtual targets use the indicator");
  return in_sensing_range(x.pos(), s, sm.a) ? sm.pd_max : 0.0;
}

Measurement measure(const KinematicState& x, const Vec2& s, const SensorModel& sm,
                    RngStream* noise) {
  const double r0 = distance(s, x.pos());
  const double b0 = std::atan2(x.py - s.y, x.px - s.x);
  Measurement z{r0, b0};
  if (noise) {
    z.range = std::max(0.0, r0 + noise->normal(0.0, sm.sigma_range(r0)));
    z.bearing = wrap_angle(b0 + noise->normal(0.0, sm.sigma_bearing(r0)));
  }
  return z;
}

double likelihood(const Measurement& z, const KinematicState& x, const Vec2& s,
                  const SensorModel& sm) {
  const double r0 = distance(s, x.pos());
  const double b0 = std::atan2(x.py - s.y, x.px - s.x);
  const double sr = sm.sigma_range(r0);
  const double sb = sm.sigma_bearing(r0);
  const double dr = (z.range - r0) / sr;
  const double db = wrap_angle(z.bearing - b0) / sb;
  return std::exp(-0.5 * (dr * dr + db * db)) / (2.0 * M_PI * sr * sb);
}

}  // namespace sat
