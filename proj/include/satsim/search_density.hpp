#pragma once

#include <string>
#include <vector>

#include "satsim/types.hpp"

namespace sat {

// Per-cell search density over the virtual-target grid. Density values live
// in (0, 1/|A|]; a cell's search value is density * |A| so a just-refreshed
// cell scores exactly 1 and decays geometrically by J per unvisited step.
class SearchGrid {
 public:
  // init_value is the initial search value (not density) of every cell.
  SearchGrid(const Rect& area, double cell_size, double decay_j, double beta,
             double init_value = 0.01);

  int cols() const { return nx_; }
  int rows() const { return ny_; }
  int size() const { return nx_ * ny_; }
  double cell_size() const { return cell_; }
  double cell_area() const { return cell_ * cell_; }
  double total_area() const { return area_.area(); }
  const Rect& area() const { return area_; }
  double decay() const { return decay_j_; }
  double beta() const { return beta_; }

  Vec2 cell_center(int idx) const;
  // Cell whose region contains p (clamped to the grid).
  int cell_at(const Vec2& p) const;

  double density(int idx) const { return d_[idx]; }
  void set_density(int idx, double d) { d_[idx] = d; }
  const std::vector<double>& densities() const { return d_; }

  double search_value(int idx) const { return d_[idx] * total_area(); }

  // Cells with search value <= beta.
  std::vector<int> unvisited_nodes() const;

  bool same_geometry(const SearchGrid& o) const;

  // "cell_x,cell_y,density" rows with a header.
  std::string to_csv() const;

 private:
  Rect area_;
  double cell_;
  double decay_j_;
  double beta_;
  int nx_, ny_;
  std::vector<double> d_;  // row-major
};

// Decay step: cells whose center was inside the previous sensing square keep
// their density, all others decay by J.
SearchGrid search_predict(const SearchGrid& g, const Vec2& s_prev, double a);

// Refresh step: cells whose center is inside the current sensing square are
// set to 1/|A|.
SearchGrid search_update(const SearchGrid& g, const Vec2& s_now, double a);

double search_value(const SearchGrid& g, int cell);

// Cellwise max; throws on geometry mismatch.
SearchGrid fuse(const SearchGrid& g1, const SearchGrid& g2);

}  // namespace sat
