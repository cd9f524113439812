#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "picardlab/data.hpp"
#include "picardlab/error.hpp"
#include "picardlab/picard.hpp"

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

TEST(TimeFactor, LimitsAndBounds) {
  EXPECT_EQ(time_factor(0.7, 0.0), cplx(0.7, 0.0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = std::abs(U(rng)) / 10.0, M = U(rng);
    const double v = std::abs(time_factor(t, M));
    EXPECT_LE(v, t * (1 + 1e-12));
    if (M != 0.0) EXPECT_LE(v, 2.0 / std::abs(M) * (1 + 1e-12));
  }
  // Small |tM| goes through the series branch; it must match the closed form.
  EXPECT_NEAR(std::abs(time_factor(1.0, 1e-9) - cplx(1.0, -0.5e-9)), 0.0, 1e-15);
}

TEST(Levels, ActivityPattern) {
  EXPECT_TRUE(level_active(1, 3));
  EXPECT_FALSE(level_active(2, 3));
  EXPECT_TRUE(level_active(3, 3));
  EXPECT_FALSE(level_active(4, 3));
  EXPECT_TRUE(level_active(5, 3));
  for (int n = 1; n < 10; ++n) EXPECT_TRUE(level_active(n, 2));
}

TEST(Iterates, InactiveLevelsAreZeroAndSupportsNest) {
  const GridSpec g = make_grid(1, 32.0, 256);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  const auto set = iterate_series(boussinesq(3), u0, 0.01, 5);
  EXPECT_TRUE(set.iterate(2).is_zero());
  EXPECT_TRUE(set.iterate(4).is_zero());
  EXPECT_FALSE(set.iterate(3).is_zero());
  const auto boxes = level_supports(boussinesq(3), u0, 5);
  for (int n : {3, 5}) {
    ASSERT_TRUE(boxes[n - 1].has_value());
    const auto& s = set.iterate(n).support();
    ASSERT_TRUE(s.has_value());
    EXPECT_GE(s->lo[0], boxes[n - 1]->lo[0]);
    EXPECT_LE(s->hi[0], boxes[n - 1]->hi[0]);
  }
}

TEST(Iterates, RealDataStaysHermitian) {
  const GridSpec g = make_grid(1, 16.0, 128);
  const SpectralField u0 = build_data({FamilyKind::KawaharaWindow, 2.0, 1.0, -2.5, 1.0}, g);
  const auto set = iterate_series(kawahara(1), u0, 1e-3, 4);
  for (int n = 1; n <= 4; ++n) EXPECT_LT(hermitian_defect(set.iterate(n)), 1e-10) << n;
}

TEST(Iterates, FirstLevelIsFreeEvolution) {
  const GridSpec g = make_grid(1, 16.0, 128);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.5, 1.0}, g);
  const double t = 0.3;
  const auto set = iterate_series(nls_uu(), u0, t, 2);
  for (std::int64_t k = 0; k < g.points; ++k) {
    const MultiIndex m{k, 0, 0};
    const cplx want = std::exp(cplx(0.0, t * nls_uu().phi(g.freq(m)))) * u0.at(m);
    EXPECT_LT(std::abs(set.iterate(1).at(m) - want), 1e-14);
  }
}

TEST(Iterates, ZeroDataGivesZeroIterates) {
  const GridSpec g = make_grid(1, 16.0, 64);
  const SpectralField u0(g);
  const auto set = iterate_series(nls_uu(), u0, 0.1, 4);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(set.norm(n, Norm::l2()), 0.0);
}

TEST(Iterates, QuadratureMatchesClosedForm) {
  const GridSpec g = make_grid(1, 16.0, 64);
  for (const auto& eq : {nls_uu(), boussinesq(2), kawahara(1), kawahara(-1), boussinesq(3)}) {
    const bool kaw = eq.dispersion.kind == DispersionSymbol::Kind::Polynomial1D;
    const FamilyKind fam = kaw ? FamilyKind::KawaharaWindow : FamilyKind::CubePair;
    const double t = kaw ? 1e-3 : 0.05;
    const SpectralField u0 = build_data({fam, 2.0, 0.5, -0.6, 1.0}, g);
    QuadratureOptions q;
    q.nodes = 129;
    q.check_tol = 1e-7;
    const auto set = iterate_series(eq, u0, t, eq.p(), q);
    const IndexBox w = middle(g, 16);
    const auto closed = leading_iterate_closed(eq, u0, t, w, ClosedStrategy::Direct);
    EXPECT_LT(rel_l2(restrict_to(set.iterate(eq.p()), w), closed), 1e-6) << eq.name;
  }
}

TEST(Iterates, DirectAndGaussLegendreAgree) {
  const GridSpec g = make_grid(1, 32.0, 256);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 4.0, 1.0, -0.6, 1.0}, g);
  const IndexBox w = middle(g, 24);
  for (const auto& eq : {nls_uu(), boussinesq(2), power_nls(2.0, 3, 1)}) {
    const auto d = leading_iterate_closed(eq, u0, 0.02, w, ClosedStrategy::Direct);
    const auto q = leading_iterate_closed(eq, u0, 0.02, w, ClosedStrategy::GaussLegendre);
    EXPECT_LT(rel_l2(q, d), 1e-8) << eq.name;
  }
}

TEST(Iterates, QuadratureCheckRejectsUnderResolvedTime) {
  const GridSpec g = make_grid(1, 64.0, 512);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 8.0, 1.0, -0.6, 1.0}, g);
  QuadratureOptions q;
  q.nodes = 9;
  q.check_tol = 1e-10;
  EXPECT_THROW(iterate_series(nls_uu(), u0, 0.5, 3, q), ConvergenceError);
}

TEST(Iterates, AliasingIsDetected) {
  const GridSpec g = make_grid(1, 8.0, 64);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.6, 1.0}, g);
  EXPECT_THROW(iterate_series(nls_uu(), u0, 0.1, 4), AliasingError);
}

TEST(SeriesSum, TailAndRegime) {
  const GridSpec g = make_grid(1, 32.0, 256);
  const SpectralField u0 = build_data({FamilyKind::CubePair, 2.0, 0.5, -0.5, 1.0}, g);
  const auto small = iterate_series(nls_uu(), u0, 0.01, 6);
  const auto s = series_sum(small);
  EXPECT_LT(s.ratio, 0.5);
  EXPECT_GE(s.tail, 0.0);
  const auto big = iterate_series(nls_uu(), scale(u0, 200.0), 0.5, 6);
  EXPECT_THROW(series_sum(big), ConvergenceError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  for (int k = 0; k <= 11; ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], k);
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(q, exact, 1e-14) << k;
  }
}
