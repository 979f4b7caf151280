#include "satsim/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum-cost assignment of all rows to distinct columns (rows <= cols),
// potentials-based Hungarian algorithm.
double assignment_min_cost(const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(cost.size());
  const int n = static_cast<int>(cost[0].size());
  std::vector<double> u(m + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);
  for (int i = 1; i <= m; ++i) {
    std::vector<double> minv(n + 1, kInf);
    std::vector<int> way(n + 1, 0);
    std::vector<bool> used(n + 1, false);
    int j0 = 0;
    match[0] = i;
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) total += cost[match[j] - 1][j - 1];
  return total;
}

}  // namespace

double ospa(const std::vector<Vec2>& x, const std::vector<Vec2>& y, double c) {
  if (c <= 0.0) throw std::invalid_argument("ospa: cutoff must be positive");
  const std::vector<Vec2>& small = x.size() <= y.size() ? x : y;
  const std::vector<Vec2>& large = x.size() <= y.size() ? y : x;
  const std::size_t m = small.size();
  const std::size_t n = large.size();
  if (n == 0) return 0.0;
  if (m == 0) return c;

  std::vector<std::vector<double>> cost(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::min(c, distance(small[i], large[j]));
      cost[i][j] = d * d;
    }
  }
  const double assigned = assignment_min_cost(cost);
  return std::sqrt((assigned + static_cast<double>(n - m) * c * c) / static_cast<double>(n));
}

void OverlapLedger::step(int i, int j, const std::vector<Vec2>& x_i, const std::vector<Vec2>& x_j,
                         const Vec2& s_i, const Vec2& s_j, double a) {
  const bool squares_meet =
      std::abs(s_i.x - s_j.x) <= a && std::abs(s_i.y - s_j.y) <= a;
  double entry;
  if (squares_meet && !x_i.empty() && !x_j.empty()) {
    entry = ospa(x_i, x_j, cutoff_);
  } else {
    entry = kInf;
  }
  std::deque<double>& q = buf_[key(i, j)];
  q.push_back(entry);
  while (static_cast<int>(q.size()) > window_) q.pop_front();
}

bool OverlapLedger::window_full(int i, int j) const {
  auto it = buf_.find(key(i, j));
  return it != buf_.end() && static_cast<int>(it->second.size()) == window_;
}

double OverlapLedger::cumulative(int i, int j) const {
  auto it = buf_.find(key(i, j));
  if (it == buf_.end() || static_cast<int>(it->second.size()) < window_) return kInf;
  double q = 0.0;
  for (double e : it->second) q += e;
  // Window-normalized score: the threshold is a per-step distance, so the
  // accumulated increments are compared on the same scale.
  return q / window_;
}

std::optional<int> OverlapLedger::decide_switch(int i, int j, RngStream& rng) {
  if (!window_full(i, j)) return std::nullopt;
  if (cumulative(i, j) > q_threshold_) return std::nullopt;
  const int chosen = rng.uniform() < 0.5 ? i : j;
  reset(i, j);
  return chosen;
}

void OverlapLedger::reset(int i, int j) { buf_.erase(key(i, j)); }

}  // namespace sat
