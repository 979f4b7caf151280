#include "satsim/track_controller.hpp"

#include <cmath>
#include <stdexcept>

namespace sat {

std::vector<Measurement> predicted_measurements(const std::vector<KinematicState>& x_hat,
                                                const Vec2& u, const SensorModel& sm) {
  std::vector<Measurement> out;
  out.reserve(x_hat.size());
  for (const KinematicState& x : x_hat) out.push_back(measure(x, u, sm, nullptr));
  return out;
}

double renyi_divergence(std::span<const double> w_pred, std::span<const double> w_post,
                        double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("renyi_divergence: alpha must be in (0, 1)");
  if (w_pred.size() != w_post.size())
    throw std::invalid_argument("renyi_divergence: weight vectors must share one support");
  double sum_pred = 0.0, sum_post = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < w_pred.size(); ++i) {
    sum_pred += w_pred[i];
    sum_post += w_post[i];
    if (w_post[i] == w_pred[i]) {
      cross += w_pred[i];  // pow is the identity here; keep exact cancellation
    } else {
      cross += std::pow(w_post[i], alpha) * std::pow(w_pred[i], 1.0 - alpha);
    }
  }
  return sum_pred + alpha / (1.0 - alpha) * sum_post - cross / (1.0 - alpha);
}

double renyi_divergence(const ParticlePhd& pred, const ParticlePhd& post, double alpha) {
  std::vector<double> wp, wq;
  wp.reserve(pred.particles.size());
  wq.reserve(post.particles.size());
  for (const Particle& p : pred.particles) wp.push_back(p.w);
  for (const Particle& p : post.particles) wq.push_back(p.w);
  return renyi_divergence(wp, wq, alpha);
}

int select_track_control(const ParticlePhd& phd_pred, const std::vector<Vec2>& controls,
                         const SensorModel& sm, double alpha, const Rect& estimate_region,
                         int kmeans_restarts) {
  if (controls.empty()) throw std::invalid_argument("select_track_control: empty control set");
  const Estimate est = phd_estimate(phd_pred, estimate_region, kmeans_restarts);

  int best = 0;
  double best_div = -1.0;
  std::vector<double> w_pred, w_post, g;
  for (std::size_t ci = 0; ci < controls.size(); ++ci) {
    const Vec2& u = controls[ci];
    const std::vector<Measurement> z_bar = predicted_measurements(est.states, u, sm);

    // Pseudo-update restricted to particles inside the hypothetical sensing
    // square; particles outside keep their weight and contribute zero
    // divergence, so they are skipped entirely.
    std::vector<const Particle*> inside;
    for (const Particle& p : phd_pred.particles)
      if (in_sensing_range(p.x.pos(), u, sm.a)) inside.push_back(&p);

    double div = 0.0;
    if (!inside.empty()) {
      const std::size_t n = inside.size();
      w_pred.resize(n);
      w_post.resize(n);
      g.resize(n);
      const double pd = sm.pd_max;
      for (std::size_t i = 0; i < n; ++i) {
        w_pred[i] = inside[i]->w;
        w_post[i] = inside[i]->w * (1.0 - pd);
      }
      for (const Measurement& z : z_bar) {
        double tau = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          g[i] = likelihood(z, inside[i]->x, u, sm);
          tau += pd * g[i] * w_pred[i];
        }
        const double denom = sm.lambda_c * sm.clutter_density(z) + tau;
        if (denom <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) w_post[i] += w_pred[i] * pd * g[i] / denom;
      }
      div = renyi_divergence(w_pred, w_post, alpha);
    }
    if (div > best_div + 1e-12) {
      best_div = div;
      best = static_cast<int>(ci);
    }
  }
  return best;
}

}  // namespace sat
