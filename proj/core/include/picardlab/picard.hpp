#pragma once

#include <optional>
#include <vector>

#include "picardlab/equations.hpp"
#include "picardlab/field.hpp"

namespace picardlab {

/// Phi(t, M) = int_0^t e^{-i t' M} dt' = (1 - e^{-itM}) / (iM), Phi(t, 0) = t.
cplx time_factor(double t, double M);

struct QuadratureOptions {
  /// Uniform Simpson nodes on [0, t]; odd and >= 9.
  int nodes = 33;
  /// When set, the run is repeated with 2K-1 nodes and a ConvergenceError is
  /// thrown if any level moves by more than this (relative, in check_norm).
  /// The finer run is returned.
  std::optional<double> check_tol;
  Norm check_norm = Norm::l2();
  /// Level: each change is relative to that level's own norm. Series:
  /// relative to the largest level norm, which is what a sum of levels sees.
  enum class CheckScale { Level, Series };
  CheckScale check_scale = CheckScale::Level;
  /// Keep I_n at every time node, not just the final one.
  bool keep_history = false;
};

/// I_1 .. I_{n_max} at time t. Levels n with n - 1 not divisible by p - 1 are
/// exactly zero.
struct IterateSet {
  EquationSpec equation;
  SpectralField data;
  double t = 0.0;
  int n_max = 1;
  std::vector<double> time_nodes;
  /// final_iterates[n - 1] = I_n(t).
  std::vector<SpectralField> final_iterates;
  /// history[n - 1][k] = I_n(t_k); empty unless keep_history.
  std::vector<std::vector<SpectralField>> history;
  /// Largest relative K vs 2K-1 change, when the check ran.
  std::optional<double> quadrature_defect;

  const SpectralField& iterate(int n) const;
  double norm(int n, const Norm& which) const;
  /// sum_{n <= upto} I_n(t).
  SpectralField partial_sum(int upto) const;
};

/// True when level n can be nonzero: n = l (p - 1) + 1.
bool level_active(int n, int p);

/// Support boxes of I_1..I_{n_max} by box arithmetic; throws AliasingError if
/// any of them leaves the paired part of the grid (indices 1..G-1).
std::vector<std::optional<IndexBox>> level_supports(const EquationSpec& eq, const SpectralField& data, int n_max);

/// Duhamel iterates by cumulative Simpson quadrature in time. Products are
/// formed in physical space; conjugated factors use conj_reflect. The mass
/// term is not part of the recursion.
IterateSet iterate_series(const EquationSpec& eq, const SpectralField& data, double t, int n_max,
                          const QuadratureOptions& options = {});

enum class ClosedStrategy { Auto, Direct, GaussLegendre };

/// I_p(t) on `window` without time stepping: tuple sums weighted by exact
/// time factors (Direct) or Gauss-Legendre in time with FFT products whose
/// node count is chosen from an a-priori error bound (GaussLegendre). Auto
/// takes Direct unless the tuple count exceeds about 5e7. p must be 2 or 3.
SpectralField leading_iterate_closed(const EquationSpec& eq, const SpectralField& data, double t,
                                     const IndexBox& window, ClosedStrategy strategy = ClosedStrategy::Auto);

/// Tuple count the direct strategy would visit.
double closed_form_tuple_count(const EquationSpec& eq, const SpectralField& data, const IndexBox& window);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

struct SeriesSum {
  SpectralField sum;
  /// Per-step geometric ratio q, max over FL1 and the tail norm. Taken as
  /// (||I_last|| / ||I_{last-2(p-1)}||)^{1/2} when that level exists, else
  /// ||I_last|| / ||I_{last-(p-1)}||.
  double ratio = 0.0;
  /// max(||I_last||, ||I_{last-(p-1)}||) q / (1 - q) in the tail norm.
  double tail = 0.0;
  int last_level = 1;
};

/// Partial sum plus a geometric tail bound. Throws ConvergenceError ("outside
/// convergence regime") when the last active levels do not decay by
/// max_ratio or better.
SeriesSum series_sum(const IterateSet& set, const Norm& tail_norm = Norm::fl1(), double max_ratio = 0.5);

}  // namespace picardlab
