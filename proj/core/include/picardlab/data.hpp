#pragma once

#include <optional>
#include <string>

#include "picardlab/field.hpp"

namespace picardlab {

enum class FamilyKind { CubePair, Slab, KawaharaWindow, SmoothPerturbation };

std::string to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);

/// Parametric initial data. Cubes are Q_r(q) = [q-r, q+r] x [-r, r]^{d-1}
/// with centers on the first axis; every family is the union of a positive
/// piece and its reflection, so the sampled data is Hermitian.
///   CubePair            Q_A(N) u Q_A(2N) and reflections
///   Slab                [N-A, N+A] x [-1, 1]^{d-1} and reflection
///   KawaharaWindow      [N-1, N+1] and reflection (d = 1)
///   SmoothPerturbation  unit-mass Gaussian truncated to [-N, N]^d
struct DataFamily {
  FamilyKind kind = FamilyKind::CubePair;
  double N = 2.0;
  double A = 1.0;
  double s = -1.0;
  /// Extra factor on top of the amplitude law (the Gaussian's amplitude for
  /// SmoothPerturbation).
  double amplitude_scale = 1.0;
};

/// Throws ValidationError when the family's standing assumptions fail.
void validate(const DataFamily& family, int dim);

/// (log N)^{-1/16} N^{-s} A^{-d/2} for cubes, A^{-1/2} in place of A^{-d/2}
/// for slabs, (log N)^{-1} N^{-s} for the Kawahara window; times amplitude_scale.
double amplitude_law(const DataFamily& family, int dim);

/// Largest |xi_a| over the support, any axis.
double outer_radius(const DataFamily& family);

/// Samples amplitude x indicator. Positive pieces use half-open cells
/// (a <= xi < b); the negative pieces are their exact node reflections.
SpectralField build_data(const DataFamily& family, const GridSpec& grid);

/// amplitude (2 pi)^{-d/2} exp(-|xi|^2 / 2) on every paired node, or only on
/// the closed box [-cutoff, cutoff]^d when a cutoff is given.
SpectralField gaussian_profile(const GridSpec& grid, double amplitude, std::optional<double> cutoff = std::nullopt);

/// Output window where the leading iterate is measured: Q_A(0) for cubes,
/// [-A, A] x [-1, 1]^{d-1} for slabs, [-1, 1] for the Kawahara window and
/// [-N, N]^d for the Gaussian. Closed boxes.
std::optional<IndexBox> output_window(const DataFamily& family, const GridSpec& grid);

/// Continuum norms of the family (amplitude x support measure), used where no
/// grid is available, e.g. when scanning N for the onset of all conditions.
struct ModelNorms {
  double L2 = 0.0;
  double FL1 = 0.0;
  double Hs = 0.0;
};
ModelNorms model_norms(const DataFamily& family, int dim);

}  // namespace picardlab
