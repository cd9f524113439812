#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "picardlab/scenario.hpp"

namespace picardlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  /// Not run (for instance over the brute-force budget); counts as passed.
  bool skipped = false;
};

struct VerifyOptions {
  /// Smaller N and fewer samples; same checks.
  bool quick = false;
  std::uint64_t seed = 1;
  /// Replaces the built-in suite for the envelope checks when non-empty.
  std::vector<ScenarioConfig> suite;
};

/// One small config per scenario kind.
std::vector<ScenarioConfig> builtin_suite();

/// r_n for one config at one N, n = p .. p + 3(p - 1).
struct EnvelopeProfile {
  std::string scenario;
  double N = 0.0;
  double t = 0.0;
  double tau = 0.0;
  int p = 2;
  /// ratios[n - 1] = r_n; 0 on inactive levels and at n = 1.
  std::vector<double> ratios;
  double r_p = 0.0;
  /// max_{n > p} r_n / r_p.
  double worst_relative = 0.0;
  bool ok = false;
};

EnvelopeProfile envelope_profile(const ScenarioConfig& cfg, double N);

/// Individual checks; each catches its own errors and reports them as failures.
CheckResult check_seq_a();
CheckResult check_seq_bound();
CheckResult check_sandwich();
CheckResult check_modulation_identity(std::uint64_t seed, int samples = 2000);
CheckResult check_modulation_envelope(std::uint64_t seed, bool quick);
CheckResult check_iterate_envelopes(const std::vector<ScenarioConfig>& suite, bool quick);
CheckResult check_oracle_agreement();

/// Temporal self-convergence of step_solver on the config's data at N:
/// log2 of successive differences for steps S, 2S, 4S.
CheckResult check_solver_order(const ScenarioConfig& cfg, double N);

/// sum_{n <= n_max} I_n against step_solver (mass term off) at the config's t.
/// Passes when the gap is within the series tail plus the solver's Richardson
/// estimate plus the quadrature defect.
CheckResult check_solver_vs_series(const ScenarioConfig& cfg, double N);

/// Cross-checks at the smallest N of the config: direct vs Gauss-Legendre
/// closed form, quadrature vs closed form, solver vs series, brute force
/// (skipped over budget) and the general-data inequality.
struct OracleReport {
  std::string scenario;
  double N = 0.0;
  std::vector<CheckResult> checks;
  bool passed() const;
};
OracleReport oracle_checks(const ScenarioConfig& cfg);

/// All checks in order; never throws for a failing check.
std::vector<CheckResult> verify_suite(const VerifyOptions& options = {});

}  // namespace picardlab
