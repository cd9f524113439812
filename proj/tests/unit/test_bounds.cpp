#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "picardlab/bounds.hpp"
#include "picardlab/error.hpp"
#include "picardlab/verify.hpp"

using namespace picardlab;

namespace {

// Plain double recursion over ordered p-tuples; shares nothing with seq_a.
std::vector<double> seq_oracle(int p, int n_max, bool kawahara) {
  std::vector<double> a(n_max + 1, 0.0);
  a[1] = 1.0;
  for (int n = 2; n <= n_max; ++n) {
    std::function<double(int, int)> tuples = [&](int left, int parts) -> double {
      if (parts == 1) return left >= 1 ? a[left] : 0.0;
      double acc = 0.0;
      for (int k = 1; k <= left - (parts - 1); ++k) acc += a[k] * tuples(left - k, parts - 1);
      return acc;
    };
    const double factor = kawahara ? 2.0 * n / (n - 1) : double(p - 1) / (n - 1);
    a[n] = factor * tuples(n, p);
  }
  return a;
}

}  // namespace

TEST(SeqA, QuadraticIsAllOnes) {
  const auto a = seq_a(2, SeqVariant::Standard, 64);
  ASSERT_EQ(a.size(), 64u);
  for (const auto& v : a) EXPECT_EQ(v, Rational(1));
}

TEST(SeqA, KawaharaValues) {
  const auto a = seq_a(2, SeqVariant::Kawahara, 3);
  EXPECT_EQ(a[0], Rational(1));
  EXPECT_EQ(a[1], Rational(4));
  EXPECT_EQ(a[2], Rational(24));
  EXPECT_THROW(seq_a(3, SeqVariant::Kawahara, 4), ValidationError);
}

TEST(SeqA, MatchesIndependentRecursion) {
  for (int p : {2, 3, 4}) {
    const auto exact = seq_a(p, SeqVariant::Standard, 14);
    const auto ref = seq_oracle(p, 14, false);
    for (int n = 1; n <= 14; ++n) EXPECT_NEAR(exact[n - 1].convert_to<double>(), ref[n], 1e-12 * ref[n]) << p << " " << n;
  }
  const auto k = seq_a(2, SeqVariant::Kawahara, 12);
  const auto kr = seq_oracle(2, 12, true);
  for (int n = 1; n <= 12; ++n) EXPECT_NEAR(k[n - 1].convert_to<double>(), kr[n], 1e-12 * kr[n]);
}

TEST(SeqBound, HoldsExactlyOnTheGrid) {
  for (auto [C, p] : {std::pair<Rational, int>{1, 2}, {1, 3}, {2, 2}, {Rational(1, 2), 4}}) {
    const auto r = verify_seq_bound(C, p, 40);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.violation_n, 0);
    EXPECT_GE(r.min_log_margin, 0.0);
  }
}

TEST(SeqBound, ConstantFormula) {
  const auto r = verify_seq_bound(2, 3, 5);
  EXPECT_NEAR(r.C0, std::numbers::pi * std::numbers::pi / 6.0 * std::sqrt(18.0), 1e-12);
}

TEST(SeqBound, ExtremalSequenceRecursion) {
  const auto b = extremal_sequence(2, 2, 4);
  // b_2 = 2 b_1^2, b_3 = 2 (2 b_1 b_2), b_4 = 2 (2 b_1 b_3 + b_2^2).
  EXPECT_EQ(b[1], Rational(2));
  EXPECT_EQ(b[2], Rational(8));
  EXPECT_EQ(b[3], Rational(40));
}

TEST(Fs, Branches) {
  EXPECT_DOUBLE_EQ(f_s(0.25, -0.3, 2), 0.25);
  EXPECT_DOUBLE_EQ(f_s(1.0, -0.3, 1), 1.0);
  EXPECT_NEAR(f_s(16.0, -0.3, 2), std::pow(16.0, 0.7), 1e-12);
  EXPECT_NEAR(f_s(16.0, -0.5, 1), std::sqrt(std::log(std::sqrt(257.0))), 1e-12);
  EXPECT_DOUBLE_EQ(f_s(16.0, -0.9, 1), 1.0);
  EXPECT_THROW(f_s(0.0, -1.0, 1), ValidationError);
  EXPECT_THROW(f_s(2.0, 0.0, 1), ValidationError);
}

TEST(Hypotheses, RejectedRanges) {
  ScenarioParams k;
  k.kind = ScenarioKind::Kawahara;
  k.alpha = 5.0;
  k.s = -0.1;
  try {
    check_hypothesis(k);
    FAIL() << "accepted s = -0.1";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("s<-2"), std::string::npos);
  }
  ScenarioParams c;
  c.s = -0.2;  // d = 1, alpha = 2, p = 2 needs s < -1.5
  EXPECT_THROW(check_hypothesis(c), ValidationError);
  c.s = 0.1;
  EXPECT_THROW(check_hypothesis(c), ValidationError);
  ScenarioParams b;
  b.kind = ScenarioKind::BoussinesqSlab;
  b.s = -0.4;
  EXPECT_THROW(check_hypothesis(b), ValidationError);
}

TEST(Hypotheses, ThetaIntervalIsInsideUnitRange) {
  for (double s : {-1.2, -1.6, -2.0}) {
    ScenarioParams c;
    c.s = s;
    const auto iv = theta_interval(c);
    EXPECT_LE(0.0, iv.lo);
    EXPECT_LE(iv.hi, 1.0);
  }
}

TEST(Parameters, OnsetOfAllConditions) {
  auto make = [](ScenarioKind k, int p, double alpha, double s) {
    ScenarioParams P;
    P.kind = k;
    P.p = p;
    P.alpha = alpha;
    P.s = s;
    return P;
  };
  EXPECT_EQ(n_min(make(ScenarioKind::DispersiveCube, 2, 2.0, -1.2)), 32.0);
  EXPECT_EQ(n_min(make(ScenarioKind::DispersiveSlab, 2, 2.0, -0.6)), 128.0);
  EXPECT_EQ(n_min(make(ScenarioKind::BoussinesqSlab, 2, 2.0, -0.8)), 2.0);
  EXPECT_EQ(n_min(make(ScenarioKind::Kawahara, 2, 5.0, -2.5)), 8.0);
  EXPECT_EQ(n_min(make(ScenarioKind::BoussinesqCube, 3, 2.0, -0.6)), 262144.0);
}

TEST(Parameters, ConditionsAreConsistent) {
  ScenarioParams P;
  P.s = -1.2;
  for (double N : {8.0, 32.0, 1024.0}) {
    const auto g = geometry(P, N);
    const auto c = choose_parameters(P, N, {1.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(c.A, g.A);
    EXPECT_GT(c.t, 0.0);
    bool all = true;
    for (const auto& cond : c.conditions) all = all && cond.satisfied;
    EXPECT_EQ(all, c.all_satisfied());
  }
}

TEST(Envelope, GeometricInLevel) {
  EnvelopeInput in;
  in.t = 0.01;
  in.norms = {2.0, 3.0, 0.5};
  in.C1 = 1.5;
  in.p = 2;
  double prev = 0.0;
  for (int n = 2; n <= 6; ++n) {
    in.n = n;
    const auto e = envelope(in);
    if (n > 2) EXPECT_NEAR(e.FL1 / prev, 1.5 * 0.01 * 3.0, 1e-12);
    prev = e.FL1;
  }
  EXPECT_NEAR(envelope_ratio(3, 0.25, 1.0, 0.5), 1.0, 1e-15);
  EXPECT_THROW(envelope_ratio(1, 1.0, 1.0, 1.0), ValidationError);
}

// The frozen constants must cover the leading ratio on every suite config.
TEST(Calibration, FrozenC1CoversSuite) {
  for (const auto& cfg : builtin_suite()) {
    const auto prof = envelope_profile(cfg, cfg.N_list.front());
    const auto kind = config_scenario_kind(cfg);
    EXPECT_LE(prof.r_p, frozen_c1(kind)) << to_string(kind);
    EXPECT_TRUE(prof.ok) << to_string(kind) << " worst " << prof.worst_relative;
  }
}
