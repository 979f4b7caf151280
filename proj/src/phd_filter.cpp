#include "satsim/phd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sat {

ParticlePhd phd_predict(const ParticlePhd& phd, const MotionModel& m, const Rect& birth_support,
                        const BirthModel& birth, RngStream& rng) {
  ParticlePhd out;
  out.particles.reserve(phd.particles.size() + birth.particles_per_step);
  for (const Particle& p : phd.particles) {
    out.particles.push_back({propagate_target(p.x, m, &rng), p.w * m.ps});
  }
  if (birth.rate > 0.0 && birth.particles_per_step > 0) {
    const double w = birth.rate / birth.particles_per_step;
    for (int i = 0; i < birth.particles_per_step; ++i) {
      KinematicState x;
      x.px = rng.uniform(birth_support.x0, birth_support.x1);
      x.py = rng.uniform(birth_support.y0, birth_support.y1);
      x.vx = rng.normal(0.0, birth.velocity_sigma);
      x.vy = rng.normal(0.0, birth.velocity_sigma);
      x.label = 1;
      out.particles.push_back({x, w});
    }
  }
  return out;
}

namespace {

struct RangeBearingModel {
  Vec2 s;
  const SensorModel& sm;
  double pd(const KinematicState& x) const {
    return in_sensing_range(x.pos(), s, sm.a) ? sm.pd_max : 0.0;
  }
  double likelihood(const Measurement& z, const KinematicState& x) const {
    return sat::likelihood(z, x, s, sm);
  }
  double kappa(const Measurement& z) const { return sm.lambda_c * sm.clutter_density(z); }
};

}  // namespace

void phd_update_inplace(ParticlePhd& phd, const std::vector<Measurement>& Z, const Vec2& s,
                        const SensorModel& sm) {
  phd_update_generic(phd, Z, RangeBearingModel{s, sm});
}

ParticlePhd phd_update(const ParticlePhd& phd, const std::vector<Measurement>& Z, const Vec2& s,
                       const SensorModel& sm) {
  ParticlePhd out = phd;
  phd_update_inplace(out, Z, s, sm);
  return out;
}

namespace {

// Weighted k-means over particle positions; returns inertia.
double kmeans_once(const std::vector<const Particle*>& pts, int k, RngStream& rng,
                   std::vector<Vec2>& centers) {
  const std::size_t n = pts.size();
  double total_w = 0.0;
  for (const Particle* p : pts) total_w += p->w;

  // Weight-proportional initialization.
  centers.clear();
  for (int c = 0; c < k; ++c) {
    double target = rng.uniform() * total_w;
    double acc = 0.0;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += pts[i]->w;
      if (acc >= target) {
        pick = i;
        break;
      }
    }
    centers.push_back(pts[pick]->x.pos());
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 30; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int bc = 0;
      const Vec2 p = pts[i]->x.pos();
      for (int c = 0; c < k; ++c) {
        const double dx = p.x - centers[c].x;
        const double dy = p.y - centers[c].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
          best = d2;
          bc = c;
        }
      }
      if (assign[i] != bc) {
        assign[i] = bc;
        changed = true;
      }
    }
    std::vector<double> wsum(k, 0.0);
    std::vector<Vec2> acc(k);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = assign[i];
      wsum[c] += pts[i]->w;
      acc[c].x += pts[i]->w * pts[i]->x.px;
      acc[c].y += pts[i]->w * pts[i]->x.py;
    }
    for (int c = 0; c < k; ++c) {
      if (wsum[c] > 0.0) {
        centers[c] = {acc[c].x / wsum[c], acc[c].y / wsum[c]};
      } else {
        centers[c] = pts[rng.pick(n)]->x.pos();
        changed = true;
      }
    }
    if (!changed) break;
  }

  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = pts[i]->x.pos();
    const Vec2 c = centers[assign[i]];
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    inertia += pts[i]->w * (dx * dx + dy * dy);
  }
  return inertia;
}

}  // namespace

Estimate phd_estimate(const ParticlePhd& phd, const Rect& region, int restarts) {
  std::vector<const Particle*> pts;
  double mass = 0.0;
  for (const Particle& p : phd.particles) {
    if (region.contains(p.x.pos())) {
      pts.push_back(&p);
      mass += p.w;
    }
  }
  Estimate est;
  est.n_hat = static_cast<int>(std::llround(mass));
  if (est.n_hat <= 0 || pts.empty()) {
    est.n_hat = std::max(est.n_hat, 0);
    return est;
  }
  const int k = std::min<int>(est.n_hat, static_cast<int>(pts.size()));

  std::vector<int> assign;
  std::vector<Vec2> best_centers;
  if (k == 1) {
    // Single cluster: the weighted mean, no search needed.
    best_centers.assign(1, {});
    double wx = 0.0, wy = 0.0;
    for (const Particle* p : pts) {
      wx += p->w * p->x.px;
      wy += p->w * p->x.py;
    }
    best_centers[0] = {wx / mass, wy / mass};
  } else {
    // Deterministic seeded initialization: a function of the input only.
    RngStream rng(0x5eedULL, "kmeans", static_cast<std::uint64_t>(pts.size()) * 131 + k);
    double best = std::numeric_limits<double>::max();
    std::vector<Vec2> centers;
    for (int r = 0; r < restarts; ++r) {
      const double inertia = kmeans_once(pts, k, rng, centers);
      if (inertia < best) {
        best = inertia;
        best_centers = centers;
      }
    }
  }

  // Emit the weighted mean state of each cluster.
  std::vector<double> wsum(k, 0.0);
  std::vector<KinematicState> acc(k);
  for (const Particle* p : pts) {
    double best = std::numeric_limits<double>::max();
    int bc = 0;
    for (int c = 0; c < k; ++c) {
      const double dx = p->x.px - best_centers[c].x;
      const double dy = p->x.py - best_centers[c].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        bc = c;
      }
    }
    wsum[bc] += p->w;
    acc[bc].px += p->w * p->x.px;
    acc[bc].vx += p->w * p->x.vx;
    acc[bc].py += p->w * p->x.py;
    acc[bc].vy += p->w * p->x.vy;
  }
  for (int c = 0; c < k; ++c) {
    if (wsum[c] <= 0.0) continue;
    KinematicState x{acc[c].px / wsum[c], acc[c].vx / wsum[c], acc[c].py / wsum[c],
                     acc[c].vy / wsum[c], 1};
    est.states.push_back(x);
  }
  return est;
}

ParticlePhd resample(const ParticlePhd& phd, double rho, RngStream& rng) {
  const double mass = phd.mass();
  ParticlePhd out;
  if (mass <= 0.0 || phd.particles.empty()) return out;
  const std::size_t n = static_cast<std::size_t>(std::ceil(rho * mass));
  if (n == 0) return out;
  out.particles.reserve(n);
  const double w = mass / static_cast<double>(n);
  const double step = mass / static_cast<double>(n);
  double pointer = rng.uniform() * step;
  double cum = 0.0;
  std::size_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double target = pointer + step * static_cast<double>(j);
    while (i + 1 < phd.particles.size() && cum + phd.particles[i].w < target) {
      cum += phd.particles[i].w;
      ++i;
    }
    out.particles.push_back({phd.particles[i].x, w});
  }
  return out;
}

}  // namespace sat
