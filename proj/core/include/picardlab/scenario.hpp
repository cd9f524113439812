#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "picardlab/bounds.hpp"
#include "picardlab/data.hpp"
#include "picardlab/equations.hpp"
#include "picardlab/grid.hpp"

namespace picardlab {

struct GridPolicy {
  /// Nodes across the narrowest feature: h = 2^-k <= min(A, 1) / nodes_per_feature.
  int nodes_per_feature = 8;
  /// Extent >= padding * n_max * outer radius of the data.
  double padding = 1.1;
  std::int64_t max_nodes = std::int64_t{1} << 22;
};

struct Thresholds {
  double ll_factor = 10.0;
  /// K vs 2K-1 tolerance for the dominance series, measured in H^s.
  double quadrature_tol = 1e-4;
  /// Records with a dominance ratio below this have leading_dominates set.
  double dominance = 0.5;
  /// Largest admissible level-to-level decay for the tail estimate.
  double series_decay = 0.5;
};

struct ScenarioConfig {
  std::string equation;
  EquationParams equation_params;
  int dim = 1;
  double beta = 1.0;
  ThetaReading theta_reading = ThetaReading::SmallPositive;
  double amplitude_scale = 1.0;
  double perturbation_amplitude = 1.0;
  FamilyKind family = FamilyKind::CubePair;
  double s = -1.0;
  std::vector<double> N_list;
  /// 0 picks p + 2(p - 1), the smallest depth the dominance ratio allows.
  int n_max = 0;
  GridPolicy grid;
  int quadrature_K = 33;
  std::uint64_t seed = 1;
  Thresholds thresholds;
  std::string out_dir = ".";
};

/// Strict JSON reader: unknown keys, wrong types and out-of-range values
/// throw ValidationError. Runs validate_config before returning.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

EquationSpec config_equation(const ScenarioConfig& cfg);
ScenarioKind config_scenario_kind(const ScenarioConfig& cfg);
ScenarioParams config_scenario(const ScenarioConfig& cfg);
int effective_n_max(const ScenarioConfig& cfg);

/// Checks the equation, the family/equation pairing, the s-range of the
/// scenario and that N_list is strictly increasing and dyadic.
void validate_config(const ScenarioConfig& cfg);

/// Grid for a family under the policy; BudgetError if it needs more than max_nodes.
GridSpec choose_grid(const DataFamily& family, int dim, int n_max, const GridPolicy& policy);

/// Everything a record is computed from: data on its grid and the chosen t.
struct PreparedScenario {
  EquationSpec equation;
  ScenarioParams params;
  DataFamily family;
  GridSpec grid;
  SpectralField u0;
  ParameterChoice choice;
  int n_max = 0;
};

/// Builds the data for one N. n_max = 0 takes effective_n_max(cfg); a larger
/// depth widens the grid accordingly. BudgetError if the grid is too big.
PreparedScenario prepare_scenario(const ScenarioConfig& cfg, double N, int n_max = 0);

struct ScenarioRecord {
  std::string scenario;
  double N = 0.0;
  double A = 0.0;
  double theta = 0.0;
  double t = 0.0;
  double norm_u0_Hs = 0.0;
  double norm_u0_FL1 = 0.0;
  double norm_u0_L2 = 0.0;
  /// ||I_p(t)||_{H^s} on the output window, from the closed form.
  double norm_Ip_Hs = 0.0;
  /// ||sum_{n <= n_max} I_n(t)||_{H^s}.
  double metric_series_Hs = 0.0;
  double dominance_ratio = 0.0;
  bool leading_dominates = false;
  bool cond_all_ok = false;
  std::string status = "ok";
  std::vector<Condition> conditions;
  GridSpec grid;
  int n_max = 0;
  /// Simpson nodes actually used (doubled until the K vs 2K-1 check passed).
  int quadrature_K = 0;
  std::optional<double> quadrature_defect;
  /// ||I_n(t)||_{H^s} and ||I_n(t)||_{FL1}, n = 1..n_max.
  std::vector<double> level_Hs;
  std::vector<double> level_FL1;
  double series_tail_Hs = 0.0;
  /// Boussinesq cubes: min of |I_p| / (t omega |v0^{*p}|) on Q_A(0) \ Q_1(0).
  std::optional<double> lower_bound_ratio;

  bool usable_for_fit() const { return cond_all_ok && status == "ok"; }
};

struct RunOptions {
  /// Iterate cache directory; empty disables caching.
  std::string cache_dir;
  /// Sweep workers; 0 takes the hardware concurrency.
  unsigned threads = 0;
};

/// One (scenario, N) record. Lower-level failures are caught and turned into
/// a non-ok status; ValidationError from the config itself propagates.
ScenarioRecord run_scenario(const ScenarioConfig& cfg, double N, const RunOptions& options = {});

/// Log power c in metric * (log N)^c used by the exponent fit.
double fit_log_power(ScenarioKind kind);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the least-squares line.
  double residual = 0.0;
  int points = 0;
  /// Slope with the smallest N dropped; set when at least 3 points remain.
  std::optional<double> slope_without_smallest;
};

/// Least-squares slope of log(metric (log N)^c) against log N over the
/// usable records. ValidationError with fewer than 4 points.
ExponentFit fit_exponent(const std::vector<ScenarioRecord>& records, double log_power);
ExponentFit fit_exponent(const std::vector<double>& N, const std::vector<double>& metric, double log_power);

struct SweepResult {
  ScenarioConfig config;
  std::string scenario;
  std::vector<ScenarioRecord> records;
  std::optional<ExponentFit> fit;
  std::string fit_error;
};

/// run_scenario over N_list on a worker pool; records are merged in N order.
SweepResult sweep(const ScenarioConfig& cfg, const RunOptions& options = {});

}  // namespace picardlab
