#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "picardlab/convolution.hpp"
#include "picardlab/data.hpp"
#include "picardlab/error.hpp"
#include "picardlab/field.hpp"
#include "picardlab/grid.hpp"
#include "picardlab/transform.hpp"

using namespace picardlab;

namespace {

SpectralField random_field(const GridSpec& g, std::mt19937_64& rng, const IndexBox& box) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> v(g.node_count());
  for_each_index(box, [&](const MultiIndex& k) { v[g.flat(k)] = cplx(U(rng), U(rng)); });
  return SpectralField(g, std::move(v), box);
}

IndexBox centred_box(const GridSpec& g, std::int64_t half) {
  IndexBox b;
  b.dim = g.dim;
  for (int a = 0; a < g.dim; ++a) {
    b.lo[a] = g.zero_index() - half;
    b.hi[a] = g.zero_index() + half;
  }
  return b;
}

}  // namespace

TEST(Grid, NodeCoordinatesAndReflection) {
  const GridSpec g = make_grid(1, 4.0, 16);
  EXPECT_DOUBLE_EQ(g.spacing, 0.5);
  EXPECT_DOUBLE_EQ(g.coord(g.zero_index()), 0.0);
  EXPECT_DOUBLE_EQ(g.coord(0), -4.0);
  for (std::int64_t k = 1; k < g.points; ++k) EXPECT_DOUBLE_EQ(g.coord(g.points - k), -g.coord(k));
}

TEST(Grid, FlatIndexRoundTrip) {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g = make_grid(d, 2.0, 8);
    std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
    for (int i = 0; i < 200; ++i) {
      const std::size_t f = pick(rng);
      EXPECT_EQ(g.flat(g.unflat(f)), f);
    }
  }
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(make_grid(0, 1.0, 8), ValidationError);
  EXPECT_THROW(make_grid(1, -1.0, 8), ValidationError);
  EXPECT_THROW(make_grid(1, 1.0, 7), ValidationError);
}

TEST(Grid, MinkowskiSumAndReflectBoxes) {
  const GridSpec g = make_grid(1, 8.0, 32);
  IndexBox a{1, {18, 0, 0}, {20, 0, 0}};
  IndexBox b{1, {14, 0, 0}, {15, 0, 0}};
  const IndexBox s = minkowski_sum(g, a, b);
  EXPECT_EQ(s.lo[0], 18 + 14 - 16);
  EXPECT_EQ(s.hi[0], 20 + 15 - 16);
  const IndexBox r = reflect(g, a);
  EXPECT_EQ(r.lo[0], 32 - 20);
  EXPECT_EQ(r.hi[0], 32 - 18);
}

TEST(Norms, IndicatorValues) {
  const GridSpec g = make_grid(1, 8.0, 64);
  std::vector<cplx> v(g.node_count());
  for (std::int64_t k = 28; k < 36; ++k) v[k] = 2.0;  // [-1, 1) at h = 1/4
  const SpectralField f(g, v);
  EXPECT_NEAR(norm(f, Norm::fl1()), 2.0 * 2.0, 1e-14);
  EXPECT_NEAR(norm(f, Norm::l2()), std::sqrt(4.0 * 2.0), 1e-14);
  EXPECT_NEAR(norm(f, Norm::fl_inf()), 2.0, 0.0);
  EXPECT_LT(norm(f, Norm::hs(-1.0)), norm(f, Norm::l2()));
}

TEST(Norms, NegativeSobolevBelowL2Property) {
  std::mt19937_64 rng(11);
  const GridSpec g = make_grid(2, 4.0, 16);
  for (int i = 0; i < 50; ++i) {
    const SpectralField f = random_field(g, rng, centred_box(g, 5));
    const double s = -std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    EXPECT_LE(norm(f, Norm::hs(s)), norm(f, Norm::l2()) * (1 + 1e-15));
  }
}

TEST(Field, ConjReflectIsAnInvolutionOnPairedNodes) {
  std::mt19937_64 rng(5);
  const GridSpec g = make_grid(2, 4.0, 16);
  for (int i = 0; i < 20; ++i) {
    const SpectralField f = random_field(g, rng, centred_box(g, 6));
    const SpectralField back = conj_reflect(conj_reflect(f));
    EXPECT_LT(norm(subtract(back, f), Norm::fl_inf()), 1e-15);
  }
}

TEST(Field, BuiltDataIsHermitian) {
  const GridSpec g = make_grid(1, 32.0, 512);
  for (FamilyKind k : {FamilyKind::CubePair, FamilyKind::Slab, FamilyKind::KawaharaWindow}) {
    const double A = k == FamilyKind::CubePair ? 2.0 : (k == FamilyKind::Slab ? 0.5 : 1.0);
    const SpectralField u = build_data({k, 8.0, A, -1.0, 1.0}, g);
    EXPECT_FALSE(u.is_zero());
    EXPECT_EQ(hermitian_defect(u), 0.0) << to_string(k);
  }
}

TEST(Transform, NextPow2) {
  EXPECT_EQ(next_pow2(1), 1);
  EXPECT_EQ(next_pow2(5), 8);
  EXPECT_EQ(next_pow2(64), 64);
}

TEST(Convolution, DirectAndTransformAgreeProperty) {
  std::mt19937_64 rng(17);
  for (int d : {1, 2}) {
    const GridSpec g = make_grid(d, 8.0, d == 1 ? 128 : 32);
    for (int i = 0; i < 10; ++i) {
      const SpectralField f = random_field(g, rng, centred_box(g, d == 1 ? 20 : 6));
      const SpectralField h = random_field(g, rng, centred_box(g, d == 1 ? 12 : 5));
      const SpectralField a = convolve_direct(f, h);
      const SpectralField b = convolve_fft(f, h);
      EXPECT_LT(norm(subtract(a, b), Norm::fl_inf()), 1e-12 * norm(a, Norm::fl_inf()));
      const SpectralField c = convolve_fft(h, f);
      EXPECT_LT(norm(subtract(b, c), Norm::fl_inf()), 1e-12 * norm(b, Norm::fl_inf()));
    }
  }
}

TEST(Convolution, IndicatorTrianglePeak) {
  const GridSpec g = make_grid(1, 8.0, 256);
  std::vector<cplx> v(g.node_count());
  const double r = 1.0;
  for (std::int64_t k = 0; k < g.points; ++k)
    if (g.coord(k) >= -r && g.coord(k) < r) v[k] = 1.0;
  const SpectralField f(g, v);
  const SpectralField c = convolve(f, f);
  // Half-open cells: -r pairs with r, which is outside, so one node drops out.
  EXPECT_NEAR(c.at(MultiIndex{g.zero_index(), 0, 0}).real(), 2.0 * r - g.spacing, 1e-12);
  // Young: ||f * f||_FL1 = ||f||_FL1^2 for nonnegative f.
  EXPECT_NEAR(norm(c, Norm::fl1()), std::pow(norm(f, Norm::fl1()), 2), 1e-10);
}

TEST(Convolution, ThrowsWhenSupportLeavesGrid) {
  const GridSpec g = make_grid(1, 4.0, 32);
  IndexBox box{1, {26, 0, 0}, {30, 0, 0}};
  std::vector<cplx> v(g.node_count());
  for (std::int64_t k = 26; k <= 30; ++k) v[k] = 1.0;
  const SpectralField f(g, v, box);
  EXPECT_THROW(convolve(f, f), AliasingError);
}

TEST(Convolution, SandwichConstants) {
  for (int d : {1, 2}) {
    const double h = d == 1 ? 1.0 / 32 : 1.0 / 16;
    for (double r : {0.5, 1.0, 2.0}) {
      const auto c = measure_sandwich(d, r, 3.0, -1.5, h);
      EXPECT_GE(c.c1, 1.0 - 4.0 * h / r) << d << " " << r;
      EXPECT_LE(c.c2, std::ldexp(1.0, d) + 4.0 * h / r) << d << " " << r;
      EXPECT_TRUE(c.support_ok);
    }
  }
}
