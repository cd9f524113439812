#include "picardlab/convolution.hpp"

#include <cmath>
#include <limits>

#include "picardlab/error.hpp"
#include "picardlab/transform.hpp"

namespace picardlab {

namespace {

constexpr std::size_t kDirectBelow = 256;

std::optional<IndexBox> output_box(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "convolve");
  if (f.is_zero() || g.is_zero()) return std::nullopt;
  IndexBox out = minkowski_sum(f.grid(), *f.support(), *g.support());
  if (!inside_grid(f.grid(), out)) throw AliasingError("convolution support leaves the grid");
  return out;
}

}  // namespace

SpectralField convolve_direct(const SpectralField& f, const SpectralField& g) {
  const auto box = output_box(f, g);
  const GridSpec& grid = f.grid();
  std::vector<cplx> out(grid.node_count());
  if (!box) return SpectralField(grid, std::move(out), std::nullopt);
  const double w = grid.cell_volume();
  const std::int64_t z = grid.zero_index();
  for_each_index(*f.support(), [&](const MultiIndex& i) {
    const cplx fi = f.at(i);
    if (fi == cplx{}) return;
    for_each_index(*g.support(), [&](const MultiIndex& j) {
      MultiIndex k = i;
      for (int a = 0; a < grid.dim; ++a) k[a] = i[a] + j[a] - z;
      out[grid.flat(k)] += fi * g.at(j) * w;
    });
  });
  return SpectralField(grid, std::move(out), box);
}

SpectralField convolve_fft(const SpectralField& f, const SpectralField& g) {
  const auto box = output_box(f, g);
  const GridSpec& grid = f.grid();
  if (!box) return SpectralField(grid);
  // The output box lies on the grid, so G bins per axis cannot wrap.
  SpectralTransform tr(grid, grid.points);
  PhysicalBuffer pf, pg;
  tr.to_physical(f.values(), f.support(), pf);
  tr.to_physical(g.values(), g.support(), pg);
  for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= pg[i];
  const double factor = grid.cell_volume() / static_cast<double>(tr.size());
  std::vector<cplx> out;
  tr.to_grid(pf, *box, factor, out);
  return SpectralField(grid, std::move(out), box);
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  if (f.grid().node_count() < kDirectBelow) return convolve_direct(f, g);
  return convolve_fft(f, g);
}

namespace {

SpectralField cube_indicator(const GridSpec& grid, double r, double q) {
  std::vector<cplx> values(grid.node_count());
  IndexBox box = full_box(grid);
  for (int a = 0; a < grid.dim; ++a) {
    const double c = a == 0 ? q : 0.0;
    box.lo[a] = static_cast<std::int64_t>(std::ceil((c - r + grid.extent) / grid.spacing - 1e-9));
    box.hi[a] = static_cast<std::int64_t>(std::ceil((c + r + grid.extent) / grid.spacing - 1e-9)) - 1;
  }
  if (!inside_grid(grid, box)) throw AliasingError("cube indicator leaves the grid");
  for_each_index(box, [&](const MultiIndex& k) { values[grid.flat(k)] = 1.0; });
  return SpectralField(grid, std::move(values), box, true);
}

}  // namespace

SandwichConstants measure_sandwich(int dim, double r, double q1, double q2, double h) {
  if (!(r > 0.0 && h > 0.0 && h <= r)) throw ValidationError("sandwich needs 0 < h <= r");
  const double reach = std::abs(q1) + std::abs(q2) + 4.0 * r + 2.0;
  const auto points = next_pow2(static_cast<std::int64_t>(std::ceil(2.0 * reach / h)));
  const GridSpec grid = make_grid(dim, 0.5 * static_cast<double>(points) * h, points);
  const SpectralField conv = convolve(cube_indicator(grid, r, q1), cube_indicator(grid, r, q2));

  const double q = q1 + q2;
  const double vol = std::pow(r, dim);
  SandwichConstants out;
  out.c1 = std::numeric_limits<double>::infinity();
  out.support_ok = true;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const Freq xi = grid.freq(grid.unflat(i));
    double dist = 0.0;  // sup distance to the centre
    for (int a = 0; a < dim; ++a) dist = std::max(dist, std::abs(xi[a] - (a == 0 ? q : 0.0)));
    const double v = conv[i].real() / vol;
    out.c2 = std::max(out.c2, v);
    if (dist <= r + 1e-12) out.c1 = std::min(out.c1, v);
    if (dist > 2.0 * r + h + 1e-12 && std::abs(conv[i]) > 1e-12) out.support_ok = false;
  }
  return out;
}

}  // namespace picardlab
