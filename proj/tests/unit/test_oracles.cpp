#include <gtest/gtest.h>

#include <cmath>

#include "picardlab/data.hpp"
#include "picardlab/error.hpp"
#include "picardlab/oracles.hpp"

using namespace picardlab;

namespace {

double rel_l2(const SpectralField& a, const SpectralField& b) {
  return norm(subtract(a, b), Norm::l2()) / norm(b, Norm::l2());
}

IndexBox middle(const GridSpec& g, std::int64_t half) {
  IndexBox w = full_box(g);
  w.lo[0] = g.zero_index() - half;
  w.hi[0] = g.zero_index() + half;
  return w;
}

}  // namespace

TEST(Brute, MatchesClosedFormOnSmallGrids) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  const IndexBox w = middle(g, 12);
  for (const auto& eq : {nls_uu(), nls_ubar2(), nls_mod2(), boussinesq(2), kawahara(1), kawahara(-1)}) {
    const auto closed = leading_iterate_closed(eq, u0, 0.01, w, ClosedStrategy::Direct);
    EXPECT_LT(rel_l2(brute_leading_iterate(eq, u0, 0.01, w), closed), 1e-10) << eq.name;
  }
}

TEST(Brute, CubicOnTinyGrid) {
  const GridSpec g = make_grid(1, 16.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  const IndexBox w = middle(g, 8);
  const auto eq = boussinesq(3);
  const auto closed = leading_iterate_closed(eq, u0, 0.02, w, ClosedStrategy::Direct);
  EXPECT_LT(rel_l2(brute_leading_iterate(eq, u0, 0.02, w), closed), 1e-10);
}

TEST(Brute, RefusesOverBudget) {
  const GridSpec g = make_grid(2, 8.0, 128);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -1.2, 1.0}, g);
  EXPECT_THROW(brute_leading_iterate(nls_uu(), u0, 0.01, full_box(g)), BudgetError);
}

TEST(Solver, FreeEvolutionIsExact) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  const auto sol = step_solver(nls_uu(), scale(u0, 0.0), 1.0, {}).solution;
  EXPECT_TRUE(sol.is_zero() || norm(sol, Norm::l2()) == 0.0);
}

TEST(Solver, FourthOrderInTime) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  const double T = 0.5;
  SolverOptions o;
  o.steps = 16;
  const auto a = step_solver(nls_uu(), u0, T, o).solution;
  o.steps = 32;
  const auto b = step_solver(nls_uu(), u0, T, o).solution;
  o.steps = 64;
  const auto c = step_solver(nls_uu(), u0, T, o).solution;
  const double e1 = norm(subtract(a, b), Norm::l2()), e2 = norm(subtract(b, c), Norm::l2());
  ASSERT_GT(e2, 0.0);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
}

TEST(Solver, RealDataStaysHermitian) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::KawaharaWindow, 2.0, 1.0, -2.5, 1.0}, g);
  SolverOptions o;
  o.steps = 400;
  const auto r = step_solver(kawahara(1), u0, 1e-3, o);
  EXPECT_LT(r.max_hermitian_defect, 1e-12);
}

TEST(Solver, BlowUpIsReported) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  SolverOptions o;
  o.steps = 400;
  EXPECT_THROW(step_solver(power_nls(2.0, 3, 0), scale(u0, 1e3), 1.0, o), ConvergenceError);
}

TEST(GeneralData, InequalityAndShrinkingDifference) {
  double prev = INFINITY;
  for (double N : {4.0, 8.0, 16.0}) {
    const GridSpec g = make_grid(1, 4.0 * N, 256);
    const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
    GeneralDataOptions o;
    o.B = Norm::hs(-0.6);
    o.init_norm = Norm::hs(-0.6);
    o.solver.steps = 40;
    const auto r = general_data_experiment(nls_uu(), u0, N, 0.01, o);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.sup_v, r.lower_bound);
    EXPECT_LT(r.log_init_diff, prev) << N;
    prev = r.log_init_diff;
  }
}

// The log-space tail norm against the difference of the two sampled profiles.
TEST(GeneralData, TailNormMatchesSampledDifference) {
  const GridSpec g = make_grid(2, 12.0, 64);
  const SpectralField u0(g);
  for (double N : {1.0, 2.0, 3.5}) {
    const auto diff = subtract(gaussian_profile(g, 0.7, N), gaussian_profile(g, 0.7));
    for (const Norm& which : {Norm::l2(), Norm::hs(-0.6), Norm::fl1(), Norm::fl_inf()}) {
      GeneralDataOptions o;
      o.perturbation_amplitude = 0.7;
      o.init_norm = which;
      o.solver.steps = 1;
      const auto r = general_data_experiment(nls_uu(), u0, N, 1e-3, o);
      EXPECT_NEAR(r.log_init_diff, std::log(norm(diff, which)), 1e-10) << N << " " << which.label();
    }
  }
}
