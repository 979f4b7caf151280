#include "satsim/search_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "satsim/world_model.hpp"

namespace sat {

SearchGrid::SearchGrid(const Rect& area, double cell_size, double decay_j, double beta,
                       double init_value)
    : area_(area), cell_(cell_size), decay_j_(decay_j), beta_(beta) {
  if (cell_size <= 0.0) throw std::invalid_argument("SearchGrid: cell size must be positive");
  nx_ = static_cast<int>(std::lround(area.width() / cell_size));
  ny_ = static_cast<int>(std::lround(area.height() / cell_size));
  if (nx_ <= 0 || ny_ <= 0) throw std::invalid_argument("SearchGrid: empty grid");
  d_.assign(static_cast<std::size_t>(nx_) * ny_, init_value / total_area());
}

Vec2 SearchGrid::cell_center(int idx) const {
  const int ix = idx % nx_;
  const int iy = idx / nx_;
  return {area_.x0 + (ix + 0.5) * cell_, area_.y0 + (iy + 0.5) * cell_};
}

int SearchGrid::cell_at(const Vec2& p) const {
  int ix = static_cast<int>(std::floor((p.x - area_.x0) / cell_));
  int iy = static_cast<int>(std::floor((p.y - area_.y0) / cell_));
  ix = std::clamp(ix, 0, nx_ - 1);
  iy = std::clamp(iy, 0, ny_ - 1);
  return iy * nx_ + ix;
}

std::vector<int> SearchGrid::unvisited_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (search_value(i) <= beta_) out.push_back(i);
  return out;
}

bool SearchGrid::same_geometry(const SearchGrid& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && cell_ == o.cell_ && area_.x0 == o.area_.x0 &&
         area_.y0 == o.area_.y0 && area_.x1 == o.area_.x1 && area_.y1 == o.area_.y1;
}

std::string SearchGrid::to_csv() const {
  std::string out = "cell_x,cell_y,density\n";
  char buf[96];
  for (int i = 0; i < size(); ++i) {
    const Vec2 c = cell_center(i);
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", c.x, c.y, d_[i]);
    out += buf;
  }
  return out;
}

SearchGrid search_predict(const SearchGrid& g, const Vec2& s_prev, double a) {
  SearchGrid out = g;
  for (int i = 0; i < g.size(); ++i) {
    if (!in_sensing_range(g.cell_center(i), s_prev, a))
      out.set_density(i, g.density(i) * g.decay());
  }
  return out;
}

SearchGrid search_update(const SearchGrid& g, const Vec2& s_now, double a) {
  SearchGrid out = g;
  const double fresh = 1.0 / g.total_area();
  for (int i = 0; i < g.size(); ++i) {
    if (in_sensing_range(g.cell_center(i), s_now, a)) out.set_density(i, fresh);
  }
  return out;
}

double search_value(const SearchGrid& g, int cell) { return g.search_value(cell); }

SearchGrid fuse(const SearchGrid& g1, const SearchGrid& g2) {
  if (!g1.same_geometry(g2)) throw std::invalid_argument("fuse: grid geometry mismatch");
  SearchGrid out = g1;
  for (int i = 0; i < g1.size(); ++i)
    out.set_density(i, std::max(g1.density(i), g2.density(i)));
  return out;
}

}  // namespace sat
