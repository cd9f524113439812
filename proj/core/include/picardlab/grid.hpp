#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace picardlab {

inline constexpr int kMaxDim = 3;

/// A point of R^d in frequency space; unused trailing components are zero.
using Freq = std::array<double, kMaxDim>;
using MultiIndex = std::array<std::int64_t, kMaxDim>;

/// Uniform frequency grid covering [-extent, extent)^d with `points` nodes per
/// axis. Node k on an axis sits at -extent + k * spacing, so index points/2 is
/// the origin and the reflection of node k is node points - k (node 0 has no
/// partner).
struct GridSpec {
  int dim = 1;
  double extent = 1.0;
  std::int64_t points = 8;
  double spacing = 0.25;

  std::size_t node_count() const;
  std::int64_t zero_index() const { return points / 2; }
  double coord(std::int64_t k) const { return -extent + static_cast<double>(k) * spacing; }
  /// Quadrature cell volume h^d.
  double cell_volume() const;

  std::size_t flat(const MultiIndex& k) const;
  MultiIndex unflat(std::size_t flat_index) const;
  Freq freq(const MultiIndex& k) const;

  bool operator==(const GridSpec& other) const = default;
};

/// Validates and builds a grid; spacing is 2 * extent / points.
GridSpec make_grid(int dim, double extent, std::int64_t points);

/// Inclusive per-axis index box on a grid.
struct IndexBox {
  int dim = 1;
  MultiIndex lo{0, 0, 0};
  MultiIndex hi{0, 0, 0};

  bool contains(const MultiIndex& k) const;
  std::size_t size() const;
  std::int64_t extent(int axis) const { return hi[axis] - lo[axis] + 1; }

  bool operator==(const IndexBox& other) const = default;
};

/// Smallest box containing both.
IndexBox hull(const IndexBox& a, const IndexBox& b);
std::optional<IndexBox> hull(const std::optional<IndexBox>& a, const std::optional<IndexBox>& b);

/// Box of the node-wise sum set, in the index convention of `grid`
/// (i + j - points/2 per axis). May extend past the grid.
IndexBox minkowski_sum(const GridSpec& grid, const IndexBox& a, const IndexBox& b);

/// Index box of -box under node reflection k -> points - k.
IndexBox reflect(const GridSpec& grid, const IndexBox& box);

/// True when every index of `box` is a valid node.
bool inside_grid(const GridSpec& grid, const IndexBox& box);

/// Nodes whose coordinates lie in the closed box [lo, hi] per axis.
std::optional<IndexBox> nodes_in_closed_box(const GridSpec& grid, const Freq& lo, const Freq& hi);

/// The full grid as a box.
IndexBox full_box(const GridSpec& grid);

/// Calls f(multi_index) for every index in the box, row-major.
template <typename F>
void for_each_index(const IndexBox& box, F&& f) {
  MultiIndex k = box.lo;
  if (box.dim == 1) {
    for (k[0] = box.lo[0]; k[0] <= box.hi[0]; ++k[0]) f(k);
  } else if (box.dim == 2) {
    for (k[0] = box.lo[0]; k[0] <= box.hi[0]; ++k[0])
      for (k[1] = box.lo[1]; k[1] <= box.hi[1]; ++k[1]) f(k);
  } else {
    for (k[0] = box.lo[0]; k[0] <= box.hi[0]; ++k[0])
      for (k[1] = box.lo[1]; k[1] <= box.hi[1]; ++k[1])
        for (k[2] = box.lo[2]; k[2] <= box.hi[2]; ++k[2]) f(k);
  }
}

}  // namespace picardlab
