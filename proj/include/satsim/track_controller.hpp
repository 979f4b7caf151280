#pragma once

#include <span>
#include <vector>

#include "satsim/phd_filter.hpp"
#include "satsim/types.hpp"
#include "satsim/world_model.hpp"

namespace sat {

// Noiseless measurement image of each predicted target as seen from a
// hypothetical agent position (the mode of the Gaussian likelihood).
std::vector<Measurement> predicted_measurements(const std::vector<KinematicState>& x_hat,
                                                const Vec2& u, const SensorModel& sm);

// Renyi divergence between two intensities sharing one particle support,
// expressed through their weight vectors. Nonnegative; zero iff equal.
double renyi_divergence(std::span<const double> w_pred, std::span<const double> w_post,
                        double alpha);

double renyi_divergence(const ParticlePhd& pred, const ParticlePhd& post, double alpha);

// Evaluates every candidate position by pseudo-updating the predicted PHD
// with its predicted measurement set and returns the index of the
// divergence-maximizing control (first index on ties). The input PHD is
// never mutated. `estimate_region` bounds the state extraction used to
// generate predicted measurements.
int select_track_control(const ParticlePhd& phd_pred, const std::vector<Vec2>& controls,
                         const SensorModel& sm, double alpha, const Rect& estimate_region,
                         int kmeans_restarts = 10);

}  // namespace sat
