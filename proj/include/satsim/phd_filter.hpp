#pragma once

#include <vector>

#include "satsim/rng.hpp"
#include "satsim/types.hpp"
#include "satsim/world_model.hpp"

namespace sat {

struct Particle {
  KinematicState x;
  double w = 0.0;
};

// Weighted particle approximation of the true-target intensity. The total
// weight is the expected number of targets.
struct ParticlePhd {
  std::vector<Particle> particles;

  double mass() const {
    double m = 0.0;
    for (const Particle& p : particles) m += p.w;
    return m;
  }
};

// Filter-side birth intensity: uniform positions over a support rectangle
// (the agent's current sensing square), Gaussian velocity prior per axis.
struct BirthModel {
  double rate = 3.0;           // expected births per step
  int particles_per_step = 300;
  double velocity_sigma = 1.0;  // m/s
};

// Survival-scaled propagation of every particle plus freshly drawn birth
// particles carrying `birth.rate` total mass.
ParticlePhd phd_predict(const ParticlePhd& phd, const MotionModel& m, const Rect& birth_support,
                        const BirthModel& birth, RngStream& rng);

// Measurement update: missed-detection term plus one term per measurement,
// with clutter intensity kappa(z). `Model` provides pd(x), likelihood(z, x)
// and kappa(z); particles with pd = 0 keep their weights untouched.
template <class Model, class Z>
void phd_update_generic(ParticlePhd& phd, const std::vector<Z>& zs, const Model& model) {
  const std::size_t n = phd.particles.size();
  std::vector<std::size_t> detectable;
  std::vector<double> pd;
  detectable.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = model.pd(phd.particles[i].x);
    if (p > 0.0) {
      detectable.push_back(i);
      pd.push_back(p);
    }
  }
  if (detectable.empty()) return;

  std::vector<double> gain(detectable.size(), 0.0);
  std::vector<double> g(detectable.size());
  for (const Z& z : zs) {
    double tau = 0.0;
    for (std::size_t k = 0; k < detectable.size(); ++k) {
      const Particle& p = phd.particles[detectable[k]];
      g[k] = model.likelihood(z, p.x);
      tau += pd[k] * g[k] * p.w;
    }
    const double denom = model.kappa(z) + tau;
    if (denom <= 0.0) continue;  // kappa must be positive wherever tau is
    for (std::size_t k = 0; k < detectable.size(); ++k) gain[k] += pd[k] * g[k] / denom;
  }
  for (std::size_t k = 0; k < detectable.size(); ++k) {
    Particle& p = phd.particles[detectable[k]];
    p.w = p.w * (1.0 - pd[k]) + p.w * gain[k];
  }
}

// Range/bearing sensor at agent position s with uniform clutter over the
// sensing square.
ParticlePhd phd_update(const ParticlePhd& phd, const std::vector<Measurement>& Z, const Vec2& s,
                       const SensorModel& sm);

// In-place variant used on pseudo-update copies in the control loop.
void phd_update_inplace(ParticlePhd& phd, const std::vector<Measurement>& Z, const Vec2& s,
                        const SensorModel& sm);

struct Estimate {
  int n_hat = 0;
  std::vector<KinematicState> states;
};

// Rounded mass in `region` and that many weighted k-means cluster centers.
Estimate phd_estimate(const ParticlePhd& phd, const Rect& region, int restarts = 10);

// Systematic resampling to ceil(rho * mass) equally weighted particles.
ParticlePhd resample(const ParticlePhd& phd, double rho, RngStream& rng);

}  // namespace sat
