#include "satsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "satsim/overlap.hpp"

namespace sat {

double searched_fraction(const std::vector<const SearchGrid*>& grids, double theta_s) {
  if (grids.empty()) throw std::invalid_argument("searched_fraction: no grids");
  SearchGrid fused = *grids[0];
  for (std::size_t i = 1; i < grids.size(); ++i) fused = fuse(fused, *grids[i]);
  int searched = 0;
  for (int c = 0; c < fused.size(); ++c)
    if (fused.search_value(c) >= theta_s) ++searched;
  return static_cast<double>(searched) / fused.size();
}

std::vector<double> ospa_timeseries(const std::vector<std::vector<Vec2>>& estimates,
                                    const std::vector<std::vector<Vec2>>& truth, double c) {
  if (estimates.size() != truth.size())
    throw std::invalid_argument("ospa_timeseries: series length mismatch");
  std::vector<double> out;
  out.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) out.push_back(ospa(estimates[k], truth[k], c));
  return out;
}

double tracking_ratio(const std::vector<TargetTally>& tallies) {
  double sum = 0.0;
  int counted = 0;
  for (const TargetTally& t : tallies) {
    if (t.lifetime_steps == 0) continue;
    sum += static_cast<double>(t.tracked_steps) / t.lifetime_steps;
    ++counted;
  }
  return counted > 0 ? sum / counted : 0.0;
}

Series aggregate(const std::vector<std::vector<double>>& trials) {
  Series s;
  if (trials.empty()) return s;
  const std::size_t len = trials[0].size();
  for (const auto& t : trials)
    if (t.size() != len) throw std::invalid_argument("aggregate: ragged trial series");
  s.mean.assign(len, 0.0);
  s.stddev.assign(len, 0.0);
  const double n = static_cast<double>(trials.size());
  for (const auto& t : trials)
    for (std::size_t k = 0; k < len; ++k) s.mean[k] += t[k] / n;
  for (const auto& t : trials)
    for (std::size_t k = 0; k < len; ++k) {
      const double d = t[k] - s.mean[k];
      s.stddev[k] += d * d / n;
    }
  for (std::size_t k = 0; k < len; ++k) s.stddev[k] = std::sqrt(s.stddev[k]);
  return s;
}

}  // namespace sat
