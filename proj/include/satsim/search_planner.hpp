#pragma once

#include <utility>
#include <vector>

#include "satsim/search_density.hpp"
#include "satsim/types.hpp"

namespace sat {

// Lattice graph over the search grid cells with Euclidean edge costs.
// Shortest-path distances between all node pairs are precomputed; ties in
// path reconstruction are broken by lowest node id for determinism.
class SearchGraph {
 public:
  explicit SearchGraph(const SearchGrid& grid, int connectivity = 8);

  int node_count() const { return static_cast<int>(centers_.size()); }
  int edge_count() const { return edge_count_; }
  Vec2 node_center(int v) const { return centers_[v]; }
  int node_at(const Vec2& p) const;

  const std::vector<std::pair<int, double>>& neighbors(int v) const { return adj_[v]; }

  // Shortest-path distance between nodes.
  double distance(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }

  // Shortest path from i to j inclusive of both endpoints.
  std::vector<int> path(int i, int j) const;

 private:
  int n_ = 0;
  int nx_ = 0;
  int edge_count_ = 0;
  double cell_ = 0.0;
  Rect area_;
  std::vector<Vec2> centers_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<double> dist_;  // n x n
  std::vector<int> parent_;   // parent_[i*n + j]: predecessor of j on path from i
};

// A walk on the graph; consecutive nodes are adjacent.
struct Plan {
  int agent = 0;
  std::vector<int> nodes;
};

double plan_cost(const SearchGraph& g, const Plan& p);

// Nearest-unvisited-node greedy walk covering `targets` from `start`.
// Ties between equal-distance candidates are broken by lowest node id.
Plan greedy_path(const SearchGraph& g, std::vector<int> targets, int start);

struct ExactPath {
  Plan plan;
  double cost = 0.0;
};

// Minimum-cost covering walk by exhaustive search over visit orders with
// shortest-path stitching. Test oracle only; rejects |targets| > 6.
ExactPath exact_path_small(const SearchGraph& g, std::vector<int> targets, int start);

struct JointPlanResult {
  std::vector<Plan> plans;
  // Nodes of the initial target set assigned to each agent; a partition.
  std::vector<std::vector<int>> assigned;
};

// Round-robin greedy partition of the unvisited nodes among agents, each
// turn appending the nearest remaining node (by shortest-path distance) to
// the turn-holder's walk. Deterministic, so cooperating agents can run it
// independently on the fused grid and agree.
JointPlanResult joint_plan(const SearchGraph& g, std::vector<int> targets,
                           const std::vector<int>& start_nodes);

// Index into `controls` of the position closest to `node`; first index wins ties.
int search_control(const std::vector<Vec2>& controls, const Vec2& node);

}  // namespace sat
