#pragma once

#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "satsim/rng.hpp"
#include "satsim/types.hpp"
#include "satsim/world_model.hpp"

namespace sat {

// Optimal sub-pattern assignment distance of order 2 between two point sets.
// Both empty -> 0; exactly one empty -> c.
double ospa(const std::vector<Vec2>& x, const std::vector<Vec2>& y, double c);

// Per agent-pair sliding windows of incremental tracking-overlap scores.
// A window entry is either an OSPA value or infinity (no overlap that step,
// which poisons the whole window).
class OverlapLedger {
 public:
  OverlapLedger(int window = 3, double cutoff = 50.0, double q_threshold = 0.9)
      : window_(window), cutoff_(cutoff), q_threshold_(q_threshold) {}

  int window() const { return window_; }
  double cutoff() const { return cutoff_; }
  double q_threshold() const { return q_threshold_; }

  // One coordination step for the pair (i, j): pushes the OSPA of the two
  // estimate sets when the sensing squares intersect and both sets are
  // nonempty, otherwise pushes the non-overlap flag.
  void step(int i, int j, const std::vector<Vec2>& x_i, const std::vector<Vec2>& x_j,
            const Vec2& s_i, const Vec2& s_j, double a);

  bool window_full(int i, int j) const;

  // Window-normalized (per-step) accumulated score; infinity when poisoned
  // or not yet full.
  double cumulative(int i, int j) const;

  // With a full window and cumulative score <= threshold, picks one of the
  // two agents uniformly at random and resets the pair's window.
  std::optional<int> decide_switch(int i, int j, RngStream& rng);

  void reset(int i, int j);

 private:
  using Key = std::pair<int, int>;
  static Key key(int i, int j) { return i < j ? Key{i, j} : Key{j, i}; }

  int window_;
  double cutoff_;
  double q_threshold_;
  std::map<Key, std::deque<double>> buf_;
};

}  // namespace sat
