#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "picardlab/data.hpp"
#include "picardlab/equations.hpp"
#include "picardlab/error.hpp"

using namespace picardlab;

namespace {

Freq v1(double x) { return Freq{x, 0.0, 0.0}; }

double dot(const Freq& a, const Freq& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

TEST(Catalog, FrozenEntries) {
  const auto uu = nls_uu();
  EXPECT_EQ(uu.p(), 2);
  EXPECT_EQ(uu.m(), 0);
  EXPECT_EQ(uu.dispersion.alpha, 2.0);
  EXPECT_EQ(nls_ubar2().m(), 2);
  EXPECT_EQ(nls_mod2().m(), 1);
  EXPECT_EQ(nls4_mod2().dispersion.alpha, 4.0);
  EXPECT_EQ(nls4_mod2().m(), 1);

  const auto b2 = boussinesq(2);
  EXPECT_TRUE(b2.mass_term);
  EXPECT_TRUE(b2.nonlinearity.real_reduction);
  EXPECT_EQ(b2.nonlinearity.multiplier, Multiplier::Omega);

  const auto k = kawahara(1);
  EXPECT_EQ(k.dispersion.kind, DispersionSymbol::Kind::Polynomial1D);
  EXPECT_DOUBLE_EQ(k.phi(v1(2.0)), 32.0 + 8.0);
  EXPECT_EQ(k.nonlinearity.mu(v1(3.0)), cplx(0.0, 3.0));
}

TEST(Catalog, PowerNlsAliasesNlsUu) { EXPECT_EQ(power_nls(2.0, 2, 0), nls_uu()); }

TEST(Catalog, CallFormsAndErrors) {
  EXPECT_EQ(catalog("power_nls(2,3,1)"), power_nls(2.0, 3, 1));
  EXPECT_EQ(catalog("boussinesq(3)"), boussinesq(3));
  EXPECT_EQ(catalog("kawahara(-1)"), kawahara(-1.0));
  EXPECT_EQ(catalog("nls_uu"), nls_uu());
  EXPECT_THROW(catalog("heat"), ValidationError);
  EXPECT_THROW(kawahara(2.0), ValidationError);
  EXPECT_THROW(catalog("kawahara(0.5)"), ValidationError);
}

TEST(Catalog, OmegaIsBoundedByOne) {
  const auto b = boussinesq(2);
  for (double x : {0.0, 0.3, 1.0, 10.0, 1e4}) {
    const double w = std::abs(b.nonlinearity.mu(v1(x)));
    EXPECT_LE(w, 1.0);
    EXPECT_NEAR(w, x * x / (1.0 + x * x), 1e-15);
  }
}

TEST(Catalog, DerivativeMultiplierNeedsOneDimension) { EXPECT_THROW(validate_equation(kawahara(0), 2), ValidationError); }

TEST(Modulation, WorkedValues) {
  std::vector<Freq> t{v1(1.0), v1(1.0)};
  EXPECT_DOUBLE_EQ(modulation(nls_uu(), t), 2.0);
  std::vector<Freq> k{v1(5.0), v1(-4.0)};
  EXPECT_DOUBLE_EQ(modulation(kawahara(0), k), 1.0 - 3125.0 + 1024.0);
}

TEST(Modulation, KawaharaVanishesOnOppositePairs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = U(rng);
    for (double b : {-1.0, 0.0, 1.0}) {
      std::vector<Freq> t{v1(x), v1(-x)};
      EXPECT_NEAR(modulation(kawahara(b), t), 0.0, 1e-12 * std::pow(std::abs(x), 5));
    }
  }
}

TEST(Modulation, InvariantUnderPermutationWithinClasses) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<Freq> x(4);
    for (auto& f : x) f = Freq{U(rng), U(rng), 0.0};
    const auto eq = power_nls(2.5, 4, 2);
    const double m0 = modulation(eq, x);
    std::vector<Freq> y{x[1], x[0], x[3], x[2]};
    EXPECT_NEAR(modulation(eq, y), m0, 1e-10 * (1.0 + std::abs(m0)));
  }
}

TEST(Modulation, CrudeRadialEnvelopeProperty) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const int p = 2 + i % 3;
    const double alpha = 0.5 + 3.0 * (U(rng) + 1.0) / 2.0;
    const double R = 10.0 * (U(rng) + 1.0);
    std::vector<Freq> x(static_cast<std::size_t>(p));
    for (auto& f : x) {
      f = Freq{U(rng), U(rng), 0.0};
      const double n = std::sqrt(dot(f, f));
      if (n > 1.0) f = Freq{f[0] / n, f[1] / n, 0.0};
      f = Freq{f[0] * R, f[1] * R, 0.0};
    }
    const auto eq = power_nls(alpha, p, i % (p + 1));
    EXPECT_LE(std::abs(modulation(eq, x)), (p + std::pow(p, alpha)) * std::pow(R, alpha) * (1 + 1e-12));
  }
}

// The fourth-order |u|^2 factorization, read with the conjugated factor at -xi_2:
// M(xi_1, -xi_2) = -[4 (xi_1 - xi_2).xi_2 (xi_1.xi_2) + 2 |xi_1 - xi_2|^2 (2 xi_1 - xi_2).xi_2].
TEST(Modulation, FourthOrderFactorization) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> U(-20.0, 20.0);
  const auto eq = nls4_mod2();
  for (int i = 0; i < 1000; ++i) {
    const Freq a{U(rng), U(rng), 0.0}, b{U(rng), U(rng), 0.0};
    const Freq d{a[0] - b[0], a[1] - b[1], 0.0};
    const Freq e{2 * a[0] - b[0], 2 * a[1] - b[1], 0.0};
    const double expanded = 4.0 * dot(d, b) * dot(a, b) + 2.0 * dot(d, d) * dot(e, b);
    std::vector<Freq> t{a, Freq{-b[0], -b[1], 0.0}};
    const double scale = std::pow(dot(a, a) + dot(b, b), 2);
    EXPECT_NEAR(modulation(eq, t), -expanded, 1e-10 * scale);
  }
}

TEST(Modulation, FaultHookFlipsSign) {
  std::vector<Freq> t{v1(1.0), v1(2.0)};
  const double m = modulation(nls_uu(), t);
  fault::set_flip_modulation_sign(true);
  const double flipped = modulation(nls_uu(), t);
  fault::set_flip_modulation_sign(false);
  EXPECT_EQ(flipped, -m);
}

TEST(ModulationEnvelope, KawaharaWindowRatioBounded) {
  for (double N : {32.0, 64.0, 128.0, 256.0, 512.0}) {
    const auto c = modulation_envelope_check(kawahara(1), {FamilyKind::KawaharaWindow, N, 1.0, -2.5, 1.0}, {1, 1000, 4, 1.0});
    EXPECT_LE(c.ratio, 6.0) << N;
    EXPECT_GT(c.tuples, 0u);
  }
}

TEST(ModulationEnvelope, SlabRatioBoundedAndDegenerateLimitFinite) {
  for (double N : {16.0, 64.0, 256.0}) {
    const auto c = modulation_envelope_check(nls_mod2(), {FamilyKind::Slab, N, 1.0 / std::sqrt(N), -0.6, 1.0}, {1, 1000, 2, 1.0});
    EXPECT_LE(c.ratio, 2.0 * (1.0 + 1.0 / N));
  }
  const auto tiny = modulation_envelope_check(nls_mod2(), {FamilyKind::Slab, 64.0, 1e-6, -0.6, 1.0}, {1, 500, 2, 1.0});
  EXPECT_TRUE(std::isfinite(tiny.ratio));
  EXPECT_LT(tiny.measured_sup, 10.0);
}
