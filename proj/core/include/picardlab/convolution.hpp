#pragma once

#include "picardlab/field.hpp"

namespace picardlab {

/// (f * g)(xi) = sum_eta f(eta) g(xi - eta) h^d on a shared grid. The result's
/// support box is the Minkowski sum of the inputs' boxes; an AliasingError is
/// thrown if that box leaves the grid. Uses direct summation for grids with
/// fewer than 256 nodes, the transform path otherwise.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

SpectralField convolve_direct(const SpectralField& f, const SpectralField& g);
SpectralField convolve_fft(const SpectralField& f, const SpectralField& g);

struct SandwichConstants {
  /// min of (1_{Q_r(q1)} * 1_{Q_r(q2)}) / r^d over the closed cube Q_r(q1 + q2).
  double c1 = 0.0;
  /// max of the same convolution / r^d over the grid.
  double c2 = 0.0;
  /// No mass outside the closed cube Q_{2r}(q1 + q2) (up to one node).
  bool support_ok = false;
};

/// Grid convolution of two half-open cube indicators of half-width r centred
/// at (q1, 0, ..) and (q2, 0, ..), with node spacing h.
SandwichConstants measure_sandwich(int dim, double r, double q1, double q2, double h);

}  // namespace picardlab
