#include "satsim/search_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace sat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SearchGraph::SearchGraph(const SearchGrid& grid, int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw std::invalid_argument("SearchGraph: connectivity must be 4 or 8");
  n_ = grid.size();
  nx_ = grid.cols();
  cell_ = grid.cell_size();
  area_ = grid.area();
  centers_.resize(n_);
  adj_.resize(n_);
  const int ny = grid.rows();
  for (int i = 0; i < n_; ++i) centers_[i] = grid.cell_center(i);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      const int v = iy * nx_ + ix;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (connectivity == 4 && dx != 0 && dy != 0) continue;
          const int jx = ix + dx;
          const int jy = iy + dy;
          if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny) continue;
          const int u = jy * nx_ + jx;
          adj_[v].push_back({u, (sat::distance)(centers_[v], centers_[u])});
        }
      }
    }
  }
  for (int v = 0; v < n_; ++v) edge_count_ += static_cast<int>(adj_[v].size());
  edge_count_ /= 2;

  // All-pairs shortest paths via Dijkstra per source (grids here are small).
  dist_.assign(static_cast<std::size_t>(n_) * n_, kInf);
  parent_.assign(static_cast<std::size_t>(n_) * n_, -1);
  for (int src = 0; src < n_; ++src) {
    double* d = &dist_[static_cast<std::size_t>(src) * n_];
    int* par = &parent_[static_cast<std::size_t>(src) * n_];
    d[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv > d[v]) continue;
      for (auto [u, c] : adj_[v]) {
        const double nd = dv + c;
        // Lexicographic (distance, parent id) keeps paths deterministic.
        if (nd < d[u] - 1e-12 || (std::abs(nd - d[u]) <= 1e-12 && par[u] > v)) {
          d[u] = nd;
          par[u] = v;
          pq.push({nd, u});
        }
      }
    }
  }
}

int SearchGraph::node_at(const Vec2& p) const {
  int ix = static_cast<int>(std::floor((p.x - area_.x0) / cell_));
  int iy = static_cast<int>(std::floor((p.y - area_.y0) / cell_));
  const int ny = n_ / nx_;
  ix = std::clamp(ix, 0, nx_ - 1);
  iy = std::clamp(iy, 0, ny - 1);
  return iy * nx_ + ix;
}

std::vector<int> SearchGraph::path(int i, int j) const {
  std::vector<int> rev;
  int v = j;
  while (v != i) {
    rev.push_back(v);
    v = parent_[static_cast<std::size_t>(i) * n_ + v];
    if (v < 0) return {};  // unreachable
  }
  rev.push_back(i);
  std::reverse(rev.begin(), rev.end());
  return rev;
}

double plan_cost(const SearchGraph& g, const Plan& p) {
  double cost = 0.0;
  for (std::size_t i = 1; i < p.nodes.size(); ++i)
    cost += distance(g.node_center(p.nodes[i - 1]), g.node_center(p.nodes[i]));
  return cost;
}

Plan greedy_path(const SearchGraph& g, std::vector<int> targets, int start) {
  Plan plan;
  plan.nodes.push_back(start);
  std::vector<bool> pending(g.node_count(), false);
  int remaining = 0;
  for (int t : targets) {
    if (!pending[t]) {
      pending[t] = true;
      ++remaining;
    }
  }
  if (pending[start]) {
    pending[start] = false;
    --remaining;
  }
  int head = start;
  while (remaining > 0) {
    int best = -1;
    double best_d = kInf;
    for (int t = 0; t < g.node_count(); ++t) {
      if (!pending[t]) continue;
      const double d = g.distance(head, t);
      if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && t < best)) {
        best_d = d;
        best = t;
      }
    }
    if (best < 0 || best_d == kInf) break;  // no extending edge exists
    const std::vector<int> seg = g.path(head, best);
    for (std::size_t i = 1; i < seg.size(); ++i) {
      plan.nodes.push_back(seg[i]);
      if (pending[seg[i]]) {
        pending[seg[i]] = false;
        --remaining;
      }
    }
    head = best;
  }
  return plan;
}

ExactPath exact_path_small(const SearchGraph& g, std::vector<int> targets, int start) {
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  targets.erase(std::remove(targets.begin(), targets.end(), start), targets.end());
  if (targets.size() > 6)
    throw std::invalid_argument("exact_path_small: instance too large for the oracle");

  ExactPath best;
  best.cost = kInf;
  if (targets.empty()) {
    best.plan.nodes = {start};
    best.cost = 0.0;
    return best;
  }
  std::vector<int> order = targets;
  do {
    double cost = g.distance(start, order.front());
    for (std::size_t i = 1; i < order.size() && cost < best.cost; ++i)
      cost += g.distance(order[i - 1], order[i]);
    if (cost < best.cost) {
      best.cost = cost;
      best.plan.nodes = {start};
      int head = start;
      for (int t : order) {
        const std::vector<int> seg = g.path(head, t);
        best.plan.nodes.insert(best.plan.nodes.end(), seg.begin() + 1, seg.end());
        head = t;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

JointPlanResult joint_plan(const SearchGraph& g, std::vector<int> targets,
                           const std::vector<int>& start_nodes) {
  if (start_nodes.empty()) throw std::invalid_argument("joint_plan: need at least one agent");
  JointPlanResult res;
  const int m = static_cast<int>(start_nodes.size());
  res.plans.resize(m);
  res.assigned.resize(m);
  std::vector<int> heads = start_nodes;
  for (int j = 0; j < m; ++j) {
    res.plans[j].agent = j;
    res.plans[j].nodes.push_back(start_nodes[j]);
  }

  std::vector<bool> pending(g.node_count(), false);
  int remaining = 0;
  for (int t : targets) {
    if (!pending[t]) {
      pending[t] = true;
      ++remaining;
    }
  }

  auto take = [&](int j, int node) {
    if (pending[node]) {
      pending[node] = false;
      --remaining;
      res.assigned[j].push_back(node);
    }
  };

  std::uint64_t delta = 0;
  while (remaining > 0) {
    ++delta;
    const int j = static_cast<int>(delta % m);
    const int head = heads[j];
    int best = -1;
    double best_d = kInf;
    for (int t = 0; t < g.node_count(); ++t) {
      if (!pending[t]) continue;
      const double d = g.distance(head, t);
      if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && t < best)) {
        best_d = d;
        best = t;
      }
    }
    if (best < 0 || best_d == kInf) break;
    const std::vector<int> seg = g.path(head, best);
    for (std::size_t i = 1; i < seg.size(); ++i) {
      res.plans[j].nodes.push_back(seg[i]);
      take(j, seg[i]);
    }
    take(j, best);  // covers head == best (distance 0)
    heads[j] = best;
  }
  return res;
}

int search_control(const std::vector<Vec2>& controls, const Vec2& node) {
  int best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const double d = distance(controls[i], node);
    if (d < best_d - 1e-12) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace sat
