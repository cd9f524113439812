#include "picardlab/data.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {

struct Piece {
  Freq lo{0, 0, 0};
  Freq hi{0, 0, 0};
  // Kept separately so the volume survives N >> A.
  double center = 0.0;
  Freq half_width{0, 0, 0};
};

Piece cube_piece(int dim, double center, double radius, double transverse) {
  Piece p;
  p.lo[0] = center - radius;
  p.hi[0] = center + radius;
  p.center = center;
  p.half_width[0] = radius;
  for (int a = 1; a < dim; ++a) {
    p.lo[a] = -transverse;
    p.hi[a] = transverse;
    p.half_width[a] = transverse;
  }
  return p;
}

std::vector<Piece> positive_pieces(const DataFamily& f, int dim) {
  switch (f.kind) {
    case FamilyKind::CubePair: return {cube_piece(dim, f.N, f.A, f.A), cube_piece(dim, 2.0 * f.N, f.A, f.A)};
    case FamilyKind::Slab: return {cube_piece(dim, f.N, f.A, 1.0)};
    case FamilyKind::KawaharaWindow: return {cube_piece(dim, f.N, 1.0, 1.0)};
    case FamilyKind::SmoothPerturbation: break;
  }
  return {};
}

// Node indices k with a <= xi_k < b on one axis.
bool half_open_range(const GridSpec& g, double a, double b, std::int64_t& first, std::int64_t& last) {
  constexpr double eps = 1e-9;
  first = static_cast<std::int64_t>(std::ceil((a + g.extent) / g.spacing - eps));
  last = static_cast<std::int64_t>(std::ceil((b + g.extent) / g.spacing - eps)) - 1;
  return first <= last;
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::CubePair: return "cube_pair";
    case FamilyKind::Slab: return "slab";
    case FamilyKind::KawaharaWindow: return "kawahara_window";
    case FamilyKind::SmoothPerturbation: return "smooth_perturbation";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& name) {
  if (name == "cube_pair") return FamilyKind::CubePair;
  if (name == "slab") return FamilyKind::Slab;
  if (name == "kawahara_window") return FamilyKind::KawaharaWindow;
  if (name == "smooth_perturbation") return FamilyKind::SmoothPerturbation;
  throw ValidationError("unknown data family '" + name + "'");
}

void validate(const DataFamily& f, int dim) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("unsupported dimension");
  if (!(f.N > 0.0) || !std::isfinite(f.N)) throw ValidationError("N must be positive");
  if (!std::isfinite(f.s)) throw ValidationError("s must be finite");
  if (!std::isfinite(f.amplitude_scale)) throw ValidationError("amplitude_scale must be finite");
  switch (f.kind) {
    case FamilyKind::CubePair:
      if (!(f.A > 0.0)) throw ValidationError("cube pair needs A > 0");
      if (f.N < std::max(2.0 * f.A, 2.0)) throw ValidationError("cube pair needs N >= max(2A, 2)");
      break;
    case FamilyKind::Slab:
      if (!(f.A > 0.0) || f.A > 1.0) throw ValidationError("slab needs 0 < A <= 1");
      if (!(f.N > 1.0)) throw ValidationError("slab needs N > 1 (log N appears in the amplitude)");
      break;
    case FamilyKind::KawaharaWindow:
      if (dim != 1) throw ValidationError("Kawahara window is one-dimensional");
      if (f.N < 2.0) throw ValidationError("Kawahara window needs N >= 2");
      break;
    case FamilyKind::SmoothPerturbation: break;
  }
}

double amplitude_law(const DataFamily& f, int dim) {
  const double logN = std::log(f.N);
  switch (f.kind) {
    case FamilyKind::CubePair:
      return f.amplitude_scale * std::pow(logN, -1.0 / 16.0) * std::pow(f.N, -f.s) * std::pow(f.A, -0.5 * dim);
    case FamilyKind::Slab:
      return f.amplitude_scale * std::pow(logN, -1.0 / 16.0) * std::pow(f.N, -f.s) * std::pow(f.A, -0.5);
    case FamilyKind::KawaharaWindow: return f.amplitude_scale * std::pow(f.N, -f.s) / logN;
    case FamilyKind::SmoothPerturbation: return f.amplitude_scale;
  }
  return 0.0;
}

double outer_radius(const DataFamily& f) {
  switch (f.kind) {
    case FamilyKind::CubePair: return 2.0 * f.N + f.A;
    case FamilyKind::Slab: return std::max(f.N + f.A, 1.0);
    case FamilyKind::KawaharaWindow: return f.N + 1.0;
    case FamilyKind::SmoothPerturbation: return f.N;
  }
  return 0.0;
}

SpectralField gaussian_profile(const GridSpec& grid, double amplitude, std::optional<double> cutoff) {
  IndexBox box = full_box(grid);
  for (int a = 0; a < grid.dim; ++a) box.lo[a] = 1;
  if (cutoff) {
    const Freq lo{-*cutoff, -*cutoff, -*cutoff};
    const Freq hi{*cutoff, *cutoff, *cutoff};
    auto b = nodes_in_closed_box(grid, lo, hi);
    if (!b) return SpectralField(grid);
    box = *b;
    for (int a = 0; a < grid.dim; ++a) box.lo[a] = std::max<std::int64_t>(box.lo[a], 1);
  }
  std::vector<cplx> values(grid.node_count());
  const double norm = amplitude * std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim);
  for_each_index(box, [&](const MultiIndex& k) {
    const Freq xi = grid.freq(k);
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    values[grid.flat(k)] = norm * std::exp(-0.5 * r2);
  });
  return SpectralField(grid, std::move(values), box, true);
}

SpectralField build_data(const DataFamily& f, const GridSpec& grid) {
  validate(f, grid.dim);
  if (outer_radius(f) >= grid.extent) throw ValidationError("data support exceeds the grid extent");
  if (f.kind == FamilyKind::SmoothPerturbation) return gaussian_profile(grid, f.amplitude_scale, f.N);

  const double amp = amplitude_law(f, grid.dim);
  std::vector<cplx> values(grid.node_count());
  std::optional<IndexBox> support;
  for (const Piece& piece : positive_pieces(f, grid.dim)) {
    IndexBox box;
    box.dim = grid.dim;
    bool empty = false;
    for (int a = 0; a < grid.dim; ++a)
      if (!half_open_range(grid, piece.lo[a], piece.hi[a], box.lo[a], box.hi[a])) empty = true;
    if (empty) continue;
    const IndexBox mirror = reflect(grid, box);
    for_each_index(box, [&](const MultiIndex& k) {
      values[grid.flat(k)] = amp;
      MultiIndex r = k;
      for (int a = 0; a < grid.dim; ++a) r[a] = grid.points - k[a];
      values[grid.flat(r)] = amp;
    });
    support = hull(support, std::optional<IndexBox>(hull(box, mirror)));
  }
  if (amp == 0.0) support.reset();
  return SpectralField(grid, std::move(values), support, true);
}

std::optional<IndexBox> output_window(const DataFamily& f, const GridSpec& grid) {
  Freq lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < grid.dim; ++a) {
    double r = 0.0;
    switch (f.kind) {
      case FamilyKind::CubePair: r = f.A; break;
      case FamilyKind::Slab: r = a == 0 ? f.A : 1.0; break;
      case FamilyKind::KawaharaWindow: r = 1.0; break;
      case FamilyKind::SmoothPerturbation: r = f.N; break;
    }
    lo[a] = -r;
    hi[a] = r;
  }
  return nodes_in_closed_box(grid, lo, hi);
}

ModelNorms model_norms(const DataFamily& f, int dim) {
  ModelNorms m;
  if (f.kind == FamilyKind::SmoothPerturbation) {
    // Untruncated unit-mass Gaussian.
    m.FL1 = f.amplitude_scale;
    m.L2 = f.amplitude_scale * std::pow(4.0 * std::numbers::pi, -0.25 * dim);
    m.Hs = m.L2;
    return m;
  }
  const double amp = amplitude_law(f, dim);
  double hs2 = 0.0, measure = 0.0;
  for (const Piece& p : positive_pieces(f, dim)) {
    double vol = 1.0;
    for (int a = 0; a < dim; ++a) vol *= 2.0 * p.half_width[a];
    const double center = p.center;
    measure += 2.0 * vol;
    hs2 += 2.0 * vol * std::pow(1.0 + center * center, f.s);
  }
  m.FL1 = amp * measure;
  m.L2 = amp * std::sqrt(measure);
  m.Hs = amp * std::sqrt(hs2);
  return m;
}

}  // namespace picardlab
