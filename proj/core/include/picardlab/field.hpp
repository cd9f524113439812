#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "picardlab/grid.hpp"

namespace picardlab {

using cplx = std::complex<double>;

/// Which norm to evaluate on a frequency-side field. All of them are
/// Riemann sums with cell volume h^d:
///   L2    (sum |u|^2 h^d)^{1/2}
///   FL1   sum |u| h^d
///   FLinf max |u|
///   Hs    (sum <xi>^{2s} |u|^2 h^d)^{1/2},  <xi> = (1 + |xi|^2)^{1/2}
struct Norm {
  enum class Kind { L2, FL1, FLinf, Hs };
  Kind kind = Kind::L2;
  double s = 0.0;

  static Norm l2() { return {Kind::L2, 0.0}; }
  static Norm fl1() { return {Kind::FL1, 0.0}; }
  static Norm fl_inf() { return {Kind::FLinf, 0.0}; }
  static Norm hs(double s) { return {Kind::Hs, s}; }

  std::string label() const;
};

/// Samples of u-hat on a GridSpec. Immutable once built; every operation
/// returns a new field. The optional support box, when present, contains
/// every index holding a nonzero value (it may be larger than the tight box).
class SpectralField {
 public:
  /// Zero field on a default 8-node line grid.
  SpectralField() : SpectralField(GridSpec{}) {}
  explicit SpectralField(const GridSpec& grid);
  /// Support box is computed by scanning for nonzero values.
  SpectralField(const GridSpec& grid, std::vector<cplx> values, bool real_data = false);
  /// Values outside `support` are zeroed so the box invariant holds exactly.
  SpectralField(const GridSpec& grid, std::vector<cplx> values, std::optional<IndexBox> support,
                bool real_data = false);

  const GridSpec& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  const std::optional<IndexBox>& support() const { return support_; }
  bool real_data() const { return real_data_; }
  bool is_zero() const { return !support_.has_value(); }

  cplx operator[](std::size_t flat) const { return values_[flat]; }
  cplx at(const MultiIndex& k) const { return values_[grid_.flat(k)]; }

 private:
  GridSpec grid_;
  std::vector<cplx> values_;
  std::optional<IndexBox> support_;
  bool real_data_ = false;
};

inline double japanese_bracket(const Freq& xi) {
  return std::sqrt(1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

double norm(const SpectralField& f, const Norm& which);
/// Norm of the restriction of f to the nodes of `box`.
double norm_on(const SpectralField& f, const Norm& which, const IndexBox& box);

/// output(xi) = conj(f(-xi)); the unpaired node at -extent maps to zero.
SpectralField conj_reflect(const SpectralField& f);

/// max |f(xi) - conj f(-xi)| over paired nodes, relative to max |f|.
double hermitian_defect(const SpectralField& f);

SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField subtract(const SpectralField& a, const SpectralField& b);
SpectralField scale(const SpectralField& f, cplx factor);
/// Zero outside `box`.
SpectralField restrict_to(const SpectralField& f, const IndexBox& box);

/// Throws ValidationError unless the grids are identical.
void require_same_grid(const SpectralField& a, const SpectralField& b, const char* op);

}  // namespace picardlab
