#include "picardlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "picardlab/error.hpp"

namespace picardlab {

std::size_t GridSpec::node_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points);
  return n;
}

double GridSpec::cell_volume() const { return std::pow(spacing, dim); }

std::size_t GridSpec::flat(const MultiIndex& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * static_cast<std::size_t>(points) + static_cast<std::size_t>(k[a]);
  return idx;
}

MultiIndex GridSpec::unflat(std::size_t flat_index) const {
  MultiIndex k{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    k[a] = static_cast<std::int64_t>(flat_index % static_cast<std::size_t>(points));
    flat_index /= static_cast<std::size_t>(points);
  }
  return k;
}

Freq GridSpec::freq(const MultiIndex& k) const {
  Freq xi{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) xi[a] = coord(k[a]);
  return xi;
}

GridSpec make_grid(int dim, double extent, std::int64_t points) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ValidationError("grid extent must be positive");
  if (points < 8 || points % 2 != 0) throw ValidationError("points per axis must be even and >= 8, got " + std::to_string(points));
  GridSpec g;
  g.dim = dim;
  g.extent = extent;
  g.points = points;
  g.spacing = 2.0 * extent / static_cast<double>(points);
  return g;
}

bool IndexBox::contains(const MultiIndex& k) const {
  for (int a = 0; a < dim; ++a)
    if (k[a] < lo[a] || k[a] > hi[a]) return false;
  return true;
}

std::size_t IndexBox::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(extent(a));
  return n;
}

IndexBox hull(const IndexBox& a, const IndexBox& b) {
  IndexBox h = a;
  for (int ax = 0; ax < a.dim; ++ax) {
    h.lo[ax] = std::min(a.lo[ax], b.lo[ax]);
    h.hi[ax] = std::max(a.hi[ax], b.hi[ax]);
  }
  return h;
}

std::optional<IndexBox> hull(const std::optional<IndexBox>& a, const std::optional<IndexBox>& b) {
  if (!a) return b;
  if (!b) return a;
  return hull(*a, *b);
}

IndexBox minkowski_sum(const GridSpec& grid, const IndexBox& a, const IndexBox& b) {
  IndexBox s = a;
  const std::int64_t z = grid.zero_index();
  for (int ax = 0; ax < a.dim; ++ax) {
    s.lo[ax] = a.lo[ax] + b.lo[ax] - z;
    s.hi[ax] = a.hi[ax] + b.hi[ax] - z;
  }
  return s;
}

IndexBox reflect(const GridSpec& grid, const IndexBox& box) {
  IndexBox r = box;
  for (int ax = 0; ax < box.dim; ++ax) {
    r.lo[ax] = grid.points - box.hi[ax];
    r.hi[ax] = grid.points - box.lo[ax];
  }
  return r;
}

bool inside_grid(const GridSpec& grid, const IndexBox& box) {
  for (int ax = 0; ax < box.dim; ++ax)
    if (box.lo[ax] < 0 || box.hi[ax] >= grid.points) return false;
  return true;
}

std::optional<IndexBox> nodes_in_closed_box(const GridSpec& grid, const Freq& lo, const Freq& hi) {
  IndexBox box;
  box.dim = grid.dim;
  const double eps = 1e-9 * grid.spacing;
  for (int ax = 0; ax < grid.dim; ++ax) {
    auto first = static_cast<std::int64_t>(std::ceil((lo[ax] + grid.extent - eps) / grid.spacing));
    auto last = static_cast<std::int64_t>(std::floor((hi[ax] + grid.extent + eps) / grid.spacing));
    first = std::max<std::int64_t>(first, 0);
    last = std::min<std::int64_t>(last, grid.points - 1);
    if (first > last) return std::nullopt;
    box.lo[ax] = first;
    box.hi[ax] = last;
  }
  return box;
}

IndexBox full_box(const GridSpec& grid) {
  IndexBox box;
  box.dim = grid.dim;
  for (int ax = 0; ax < grid.dim; ++ax) box.hi[ax] = grid.points - 1;
  return box;
}

}  // namespace picardlab
