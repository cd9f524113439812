#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "picardlab/data.hpp"

namespace picardlab {

using Rational = boost::multiprecision::cpp_rational;

enum class SeqVariant {
  /// a_n = (p-1)/(n-1) sum a_{n_1} ... a_{n_p}
  Standard,
  /// a_n = 2n/(n-1) sum a_{n_1} a_{n_2}
  Kawahara,
};

/// a_1 .. a_{n_max} (index 0 holds a_1), exact. Sums run over ordered
/// p-tuples of positive integers adding up to n. Kawahara requires p = 2.
std::vector<Rational> seq_a(int p, SeqVariant variant, int n_max);

/// b_1 = 1, b_n = C sum b_{n_1} ... b_{n_p}: the extremal sequence of the
/// hypothesis a_n <= C sum a_{n_1} ... a_{n_p}.
std::vector<Rational> extremal_sequence(const Rational& C, int p, int n_max);

struct SeqBoundReport {
  bool ok = true;
  /// C0 = pi^2/6 (C p^2)^{1/(p-1)}.
  double C0 = 0.0;
  /// min over n with b_n > 0 of log(C0^{n-1} / b_n).
  double min_log_margin = 0.0;
  int tightest_n = 1;
  /// First n with b_n > C0^{n-1}; 0 when none.
  int violation_n = 0;
  std::string detail;
};

/// Checks b_n <= C0^{n-1} exactly for n <= n_max, comparing against a
/// rational lower bound of C0 (so a pass is a proof).
SeqBoundReport verify_seq_bound(const Rational& C, int p, int n_max);

/// F_s(A): A^{d/2} for A <= 1; otherwise A^{s+d/2} (-d/2 < s < 0),
/// (log <A>)^{1/2} (s = -d/2), 1 (s < -d/2). Throws for s >= 0 or A <= 0.
double f_s(double A, double s, int d);

enum class ScenarioKind { DispersiveCube, DispersiveSlab, BoussinesqCube, BoussinesqSlab, Kawahara };
enum class ThetaReading { SmallPositive, Zero };

std::string to_string(ScenarioKind kind);
std::string to_string(ThetaReading reading);
ThetaReading theta_reading_from_string(const std::string& name);
ScenarioKind scenario_kind_from_string(const std::string& name);
FamilyKind family_for(ScenarioKind kind);

struct ScenarioParams {
  ScenarioKind kind = ScenarioKind::DispersiveCube;
  int d = 1;
  double alpha = 2.0;
  double beta = 1.0;
  int p = 2;
  double s = -1.0;
  ThetaReading theta_reading = ThetaReading::SmallPositive;
  /// x << y is read as x <= y / ll_factor.
  double ll_factor = 10.0;
};

/// Throws ValidationError naming the failed inequality when s lies outside
/// the scenario's range.
void check_hypothesis(const ScenarioParams& params);

struct ThetaInterval {
  double lo = 0.0;
  double hi = 0.0;
  /// The interval degenerates to the single value lo.
  bool point = false;
  double midpoint() const { return point ? lo : 0.5 * (lo + hi); }
};
ThetaInterval theta_interval(const ScenarioParams& params);

struct Geometry {
  double theta = 0.0;
  double A = 1.0;
};
/// theta (midpoint of its interval) and A = N^theta, or A = N / log N when
/// s = -d/2, p = 2 on cubes. The Kawahara window has A = 1.
Geometry geometry(const ScenarioParams& params, double N);

struct DataNorms {
  double L2 = 0.0;
  double FL1 = 0.0;
  double Hs = 0.0;
};

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// "<=", "<", ">=" or ">".
  std::string relation;
  bool satisfied = false;
};

struct ParameterChoice {
  std::string scenario;
  double N = 0.0;
  double A = 1.0;
  double theta = 0.0;
  double t = 0.0;
  std::vector<Condition> conditions;
  bool all_satisfied() const;
};

ParameterChoice choose_parameters(const ScenarioParams& params, double N, const DataNorms& norms);

/// Smallest dyadic N from which every condition holds for all dyadic N up to
/// 2^40, using continuum norms of the scenario's data. +inf if none.
double n_min(const ScenarioParams& params);

/// Envelope inputs; tau = t^{1/(p-1)} (Standard) or N t (Kawahara).
struct EnvelopeInput {
  int n = 1;
  double t = 0.0;
  DataNorms norms;
  SeqVariant variant = SeqVariant::Standard;
  int p = 2;
  double C1 = 1.0;
  double N = 1.0;
  /// F_s(A); ignored by the Kawahara variant.
  double Fs = 1.0;
};

struct EnvelopeBound {
  double FL1 = 0.0;
  double L2 = 0.0;
  double Hs = 0.0;
};

/// (C1 tau ||u0||_FL1)^{n-1} ||u0||_FL1, the same with ||u0||_L2, and
/// C1^n tau^{n-1} ||u0||_FL1^{n-2} ||u0||_L2^2 F_s(A) for H^s (n >= 2;
/// ||u0||_{H^s} at n = 1).
EnvelopeBound envelope(const EnvelopeInput& in);

/// r_n = (||I_n||_FL1 / ||u0||_FL1)^{1/(n-1)} / (tau ||u0||_FL1).
double envelope_ratio(int n, double iterate_fl1, double data_fl1, double tau);

/// Frozen C1 per scenario, fitted as the largest r_p over the calibration suite.
double frozen_c1(ScenarioKind kind);

}  // namespace picardlab
