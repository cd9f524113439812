#pragma once

#include <optional>
#include <vector>

#include "picardlab/equations.hpp"
#include "picardlab/field.hpp"
#include "picardlab/picard.hpp"

namespace picardlab {

/// I_p(t) on `window` by looping over every p-tuple of grid nodes. Shares no
/// code with the iterate engine. Throws BudgetError when (G^d)^p > 2^24.
SpectralField brute_leading_iterate(const EquationSpec& eq, const SpectralField& data, double t,
                                    const IndexBox& window);

struct SolverOptions {
  /// Number of RK4 steps on [0, T]; the step is T / steps.
  int steps = 200;
  /// Defaults to the equation's own mass_term flag.
  std::optional<bool> include_mass;
  /// Norm whose supremum over the step times is reported.
  Norm tracked = Norm::l2();
  /// Abort once ||u||_{L2} + ||u||_{FL1} exceeds this multiple of 2 ||u0||.
  double blowup_factor = 10.0;
};

struct SolverResult {
  SpectralField solution;
  double dt = 0.0;
  int steps = 0;
  double sup_tracked = 0.0;
  /// Largest Hermitian defect seen after a step (0 unless the equation preserves real data).
  double max_hermitian_defect = 0.0;
};

/// Integrating-factor RK4 for d/dt u-hat = i phi u-hat + N(u-hat), on the
/// data's grid. Products are zero-padded so no wrap-around reaches the grid.
/// Throws ConvergenceError on norm blow-up.
SolverResult step_solver(const EquationSpec& eq, const SpectralField& data, double T,
                         const SolverOptions& options = {});

struct GeneralDataOptions {
  Norm B = Norm::l2();
  /// Norm for ||v(0) - phi - u0||.
  Norm init_norm = Norm::l2();
  double perturbation_amplitude = 1.0;
  double c_star = 1.0;
  /// Series depth for the Kawahara branch.
  int n_max = 6;
  QuadratureOptions quadrature{};
  SolverOptions solver{};
  /// Constant in the Kawahara difference envelope; <= 0 skips that check.
  double c1 = 0.0;
};

struct GeneralDataReport {
  /// ||v(0) - phi - u0||_B with v(0) = u0 + phi_N.
  double init_diff = 0.0;
  /// Natural log of init_diff; the difference is the Gaussian tail beyond N,
  /// which underflows to zero in double precision once N exceeds about 40.
  double log_init_diff = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
  /// ||phi_N||_{L2} + ||phi_N||_{FL1}.
  double phi_D = 0.0;
  double lower_bound = 0.0;
  bool holds = false;
  /// Kawahara only: ||I_n[u0] - I_n[v0]||_D / ((N t ||u0||_FL1)^{n-1} ||phi_N||_D), n = 1..4.
  std::vector<double> difference_ratios;
  bool difference_ok = true;
};

/// Runs u from u0 and v from u0 + phi_N (Gaussian cut to [-N, N]^d) up to t
/// and checks sup ||v||_B >= sup ||u||_B / 2 - c_star ||phi_N||_D. The
/// Kawahara equation is propagated by its truncated Picard series, the
/// others by step_solver.
GeneralDataReport general_data_experiment(const EquationSpec& eq, const SpectralField& u0, double N, double t,
                                          const GeneralDataOptions& options = {});

}  // namespace picardlab
