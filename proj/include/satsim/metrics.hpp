#pragma once

#include <vector>

#include "satsim/search_density.hpp"
#include "satsim/sim_engine.hpp"
#include "satsim/types.hpp"

namespace sat {

// Fraction of cells whose fused search value is >= theta_s.
double searched_fraction(const std::vector<const SearchGrid*>& grids, double theta_s);

// Per-step OSPA between estimate and truth position sets.
std::vector<double> ospa_timeseries(const std::vector<std::vector<Vec2>>& estimates,
                                    const std::vector<std::vector<Vec2>>& truth, double c);

// Mean over targets of tracked-time / lifetime; targets never alive are
// skipped. Returns 0 when no target was ever alive.
double tracking_ratio(const std::vector<TargetTally>& tallies);

struct Series {
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Per-step mean and (population) standard deviation across trials.
Series aggregate(const std::vector<std::vector<double>>& trials);

}  // namespace sat
