#include "picardlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "picardlab/cache.hpp"
#include "picardlab/convolution.hpp"
#include "picardlab/error.hpp"
#include "picardlab/picard.hpp"
#include "picardlab/transform.hpp"

namespace picardlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw ValidationError("unknown key '" + item.key() + "' in " + where);
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

bool is_dyadic(double N) {
  if (!(N >= 2.0) || !std::isfinite(N)) return false;
  int e = 0;
  return std::frexp(N, &e) == 0.5;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, {"equation", "params", "family", "s", "N_list", "n_max", "grid", "quadrature_K", "seed",
                        "thresholds", "out_dir"},
                 "config");
  for (const char* key : {"equation", "family", "s", "N_list"})
    if (!root.contains(key)) throw ValidationError(std::string("config is missing '") + key + "'");

  ScenarioConfig cfg;
  cfg.equation = get_string(root, "equation", "config");
  cfg.family = family_from_string(get_string(root, "family", "config"));
  cfg.s = get_number(root, "s", "config");

  const auto& list = root.at("N_list");
  if (!list.is_array() || list.empty()) throw ValidationError("config.N_list must be a non-empty array");
  for (const auto& v : list) {
    if (!v.is_number()) throw ValidationError("config.N_list entries must be numbers");
    cfg.N_list.push_back(v.get<double>());
  }
  if (root.contains("n_max")) cfg.n_max = get_int(root, "n_max", "config");
  if (root.contains("quadrature_K")) cfg.quadrature_K = get_int(root, "quadrature_K", "config");
  if (root.contains("seed")) {
    const auto& v = root.at("seed");
    if (!v.is_number_unsigned()) throw ValidationError("config.seed must be a nonnegative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (root.contains("out_dir")) cfg.out_dir = get_string(root, "out_dir", "config");

  if (root.contains("params")) {
    const auto& p = root.at("params");
    reject_unknown(p, {"d", "alpha", "p", "m", "b", "beta", "theta_reading", "amplitude_scale",
                       "perturbation_amplitude"},
                   "params");
    if (p.contains("d")) cfg.dim = get_int(p, "d", "params");
    if (p.contains("alpha")) cfg.equation_params.alpha = get_number(p, "alpha", "params");
    if (p.contains("p")) cfg.equation_params.p = get_int(p, "p", "params");
    if (p.contains("m")) cfg.equation_params.m = get_int(p, "m", "params");
    if (p.contains("b")) cfg.equation_params.b = get_number(p, "b", "params");
    if (p.contains("beta")) cfg.beta = get_number(p, "beta", "params");
    if (p.contains("theta_reading")) cfg.theta_reading = theta_reading_from_string(get_string(p, "theta_reading", "params"));
    if (p.contains("amplitude_scale")) cfg.amplitude_scale = get_number(p, "amplitude_scale", "params");
    if (p.contains("perturbation_amplitude"))
      cfg.perturbation_amplitude = get_number(p, "perturbation_amplitude", "params");
  }
  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    reject_unknown(g, {"nodes_per_feature", "padding", "max_nodes"}, "grid");
    if (g.contains("nodes_per_feature")) cfg.grid.nodes_per_feature = get_int(g, "nodes_per_feature", "grid");
    if (g.contains("padding")) cfg.grid.padding = get_number(g, "padding", "grid");
    if (g.contains("max_nodes")) {
      if (!g.at("max_nodes").is_number_integer()) throw ValidationError("grid.max_nodes must be an integer");
      cfg.grid.max_nodes = g.at("max_nodes").get<std::int64_t>();
    }
  }
  if (root.contains("thresholds")) {
    const auto& t = root.at("thresholds");
    reject_unknown(t, {"ll_factor", "quadrature_tol", "dominance", "series_decay"}, "thresholds");
    if (t.contains("ll_factor")) cfg.thresholds.ll_factor = get_number(t, "ll_factor", "thresholds");
    if (t.contains("quadrature_tol")) cfg.thresholds.quadrature_tol = get_number(t, "quadrature_tol", "thresholds");
    if (t.contains("dominance")) cfg.thresholds.dominance = get_number(t, "dominance", "thresholds");
    if (t.contains("series_decay")) cfg.thresholds.series_decay = get_number(t, "series_decay", "thresholds");
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

EquationSpec config_equation(const ScenarioConfig& cfg) { return catalog(cfg.equation, cfg.equation_params); }

ScenarioKind config_scenario_kind(const ScenarioConfig& cfg) {
  const EquationSpec eq = config_equation(cfg);
  const bool kawahara = eq.dispersion.kind == DispersionSymbol::Kind::Polynomial1D;
  const bool bsq = eq.nonlinearity.multiplier == Multiplier::Omega;
  switch (cfg.family) {
    case FamilyKind::KawaharaWindow:
      if (!kawahara) throw ValidationError("family kawahara_window needs the kawahara equation");
      return ScenarioKind::Kawahara;
    case FamilyKind::CubePair:
      if (kawahara) throw ValidationError("the kawahara equation needs family kawahara_window");
      return bsq ? ScenarioKind::BoussinesqCube : ScenarioKind::DispersiveCube;
    case FamilyKind::Slab:
      if (kawahara) throw ValidationError("the kawahara equation needs family kawahara_window");
      return bsq ? ScenarioKind::BoussinesqSlab : ScenarioKind::DispersiveSlab;
    case FamilyKind::SmoothPerturbation: break;
  }
  throw ValidationError("family smooth_perturbation is a perturbation profile, not a scenario family");
}

ScenarioParams config_scenario(const ScenarioConfig& cfg) {
  const EquationSpec eq = config_equation(cfg);
  ScenarioParams P;
  P.kind = config_scenario_kind(cfg);
  P.d = cfg.dim;
  P.alpha = eq.dispersion.kind == DispersionSymbol::Kind::RadialPower ? eq.dispersion.alpha : 5.0;
  P.beta = cfg.beta;
  P.p = eq.p();
  P.s = cfg.s;
  P.theta_reading = cfg.theta_reading;
  P.ll_factor = cfg.thresholds.ll_factor;
  return P;
}

int effective_n_max(const ScenarioConfig& cfg) {
  const int p = config_equation(cfg).p();
  return cfg.n_max > 0 ? cfg.n_max : p + 2 * (p - 1);
}

void validate_config(const ScenarioConfig& cfg) {
  const EquationSpec eq = config_equation(cfg);
  validate_equation(eq, cfg.dim);
  check_hypothesis(config_scenario(cfg));
  const int p = eq.p();
  if (cfg.n_max != 0 && cfg.n_max < p + 2 * (p - 1))
    throw ValidationError("n_max must be at least p + 2(p - 1) = " + std::to_string(p + 2 * (p - 1)));
  if (cfg.quadrature_K < 9 || cfg.quadrature_K % 2 == 0) throw ValidationError("quadrature_K must be odd and >= 9");
  for (std::size_t i = 0; i < cfg.N_list.size(); ++i) {
    if (!is_dyadic(cfg.N_list[i])) throw ValidationError("N_list entries must be powers of two >= 2, got " + fmt17(cfg.N_list[i]));
    if (i > 0 && !(cfg.N_list[i] > cfg.N_list[i - 1])) throw ValidationError("N_list must be strictly increasing");
  }
  if (cfg.N_list.empty()) throw ValidationError("N_list is empty");
  if (!(cfg.amplitude_scale >= 0.0) || !std::isfinite(cfg.amplitude_scale))
    throw ValidationError("amplitude_scale must be finite and >= 0");
  if (!(cfg.perturbation_amplitude >= 0.0)) throw ValidationError("perturbation_amplitude must be >= 0");
  if (cfg.grid.nodes_per_feature < 2) throw ValidationError("grid.nodes_per_feature must be >= 2");
  if (!(cfg.grid.padding >= 1.0)) throw ValidationError("grid.padding must be >= 1");
  if (cfg.grid.max_nodes < 64) throw ValidationError("grid.max_nodes must be >= 64");
  const Thresholds& th = cfg.thresholds;
  if (!(th.ll_factor > 1.0)) throw ValidationError("thresholds.ll_factor must exceed 1");
  if (!(th.quadrature_tol > 0.0)) throw ValidationError("thresholds.quadrature_tol must be positive");
  if (!(th.dominance > 0.0)) throw ValidationError("thresholds.dominance must be positive");
  if (!(th.series_decay > 0.0 && th.series_decay < 1.0)) throw ValidationError("thresholds.series_decay must lie in (0, 1)");
}

GridSpec choose_grid(const DataFamily& family, int dim, int n_max, const GridPolicy& policy) {
  const double feature = std::min(family.A, 1.0);
  const int k = static_cast<int>(std::ceil(std::log2(policy.nodes_per_feature / feature) - 1e-12));
  const double h = std::ldexp(1.0, -k);
  const double reach = policy.padding * n_max * outer_radius(family);
  std::int64_t points = next_pow2(static_cast<std::int64_t>(std::floor(2.0 * reach / h)) + 1);
  points = std::max<std::int64_t>(points, 16);
  const double total = std::pow(static_cast<double>(points), dim);
  if (total > static_cast<double>(policy.max_nodes))
    throw BudgetError("grid needs " + fmt17(total) + " nodes, above max_nodes = " + std::to_string(policy.max_nodes));
  return make_grid(dim, 0.5 * static_cast<double>(points) * h, points);
}

namespace {

std::string cache_key(const ScenarioConfig& cfg, const EquationSpec& eq, const DataFamily& fam, const GridSpec& g,
                      double t, int n_max, int K, double tol) {
  std::ostringstream os;
  os << "eq=" << cfg.equation << ";alpha=" << fmt17(cfg.equation_params.alpha) << ";p=" << eq.p()
     << ";m=" << eq.m() << ";b=" << fmt17(cfg.equation_params.b) << ";family=" << to_string(fam.kind)
     << ";N=" << fmt17(fam.N) << ";A=" << fmt17(fam.A) << ";s=" << fmt17(fam.s)
     << ";amp=" << fmt17(fam.amplitude_scale) << ";grid=" << g.dim << "," << fmt17(g.extent) << "," << g.points
     << ";t=" << fmt17(t) << ";n_max=" << n_max << ";K=" << K << ";tol=" << fmt17(tol);
  return os.str();
}

// Series with the K vs 2K-1 check in H^s, refining K up to four times.
IterateSet converged_series(const EquationSpec& eq, const SpectralField& u0, double t, int n_max, int K, double s,
                            double tol, int& K_used) {
  QuadratureOptions q;
  q.check_tol = tol;
  q.check_norm = Norm::hs(s);
  q.check_scale = QuadratureOptions::CheckScale::Series;
  q.nodes = K;
  for (int attempt = 0;; ++attempt) {
    try {
      IterateSet set = iterate_series(eq, u0, t, n_max, q);
      K_used = 2 * q.nodes - 1;
      return set;
    } catch (const ConvergenceError&) {
      if (attempt == 3) throw;
      q.nodes = 2 * q.nodes - 1;
    }
  }
}

// min |I_p| / (t |a mu| 2^{p[real]} |v0^{*p}|) on Q_A(0) minus Q_1(0).
std::optional<double> cosine_lower_bound(const EquationSpec& eq, const SpectralField& u0, const SpectralField& Ip,
                                         double t, double A) {
  if (!Ip.support() || A <= 1.0) return std::nullopt;
  SpectralField conv = u0;
  for (int j = 1; j < eq.p(); ++j) conv = convolve(conv, u0);
  const GridSpec& g = u0.grid();
  double peak = 0.0;
  for_each_index(*Ip.support(), [&](const MultiIndex& k) { peak = std::max(peak, std::abs(conv.at(k))); });
  if (peak == 0.0) return std::nullopt;
  const double branch = eq.nonlinearity.real_reduction ? std::ldexp(1.0, eq.p()) : 1.0;
  double worst = std::numeric_limits<double>::infinity();
  for_each_index(*Ip.support(), [&](const MultiIndex& k) {
    const Freq xi = g.freq(k);
    double sup = 0.0;
    for (int a = 0; a < g.dim; ++a) sup = std::max(sup, std::abs(xi[a]));
    if (sup <= 1.0) return;
    const double c = std::abs(conv.at(k));
    if (c < 1e-9 * peak) return;
    const double scale = t * std::abs(eq.nonlinearity.coefficient * eq.nonlinearity.mu(xi)) * branch * c;
    if (scale > 0.0) worst = std::min(worst, std::abs(Ip.at(k)) / scale);
  });
  if (!std::isfinite(worst)) return std::nullopt;
  return worst;
}

}  // namespace

PreparedScenario prepare_scenario(const ScenarioConfig& cfg, double N, int n_max) {
  if (!is_dyadic(N)) throw ValidationError("N must be a power of two >= 2, got " + fmt17(N));
  PreparedScenario ps;
  ps.equation = config_equation(cfg);
  ps.params = config_scenario(cfg);
  ps.n_max = n_max > 0 ? n_max : effective_n_max(cfg);
  const Geometry geo = geometry(ps.params, N);
  ps.family = DataFamily{cfg.family, N, geo.A, cfg.s, cfg.amplitude_scale};
  ps.grid = choose_grid(ps.family, cfg.dim, ps.n_max, cfg.grid);
  ps.u0 = build_data(ps.family, ps.grid);
  const DataNorms norms{norm(ps.u0, Norm::l2()), norm(ps.u0, Norm::fl1()), norm(ps.u0, Norm::hs(cfg.s))};
  ps.choice = choose_parameters(ps.params, N, norms);
  return ps;
}

ScenarioRecord run_scenario(const ScenarioConfig& cfg, double N, const RunOptions& options) {
  const EquationSpec eq = config_equation(cfg);
  const ScenarioParams P = config_scenario(cfg);
  if (!is_dyadic(N)) throw ValidationError("N must be a power of two >= 2, got " + fmt17(N));
  const int n_max = effective_n_max(cfg);
  const int p = eq.p();

  ScenarioRecord rec;
  rec.scenario = to_string(P.kind);
  rec.N = N;
  rec.n_max = n_max;
  const Geometry geo = geometry(P, N);
  rec.A = geo.A;
  rec.theta = geo.theta;

  PreparedScenario ps;
  try {
    ps = prepare_scenario(cfg, N, n_max);
  } catch (const BudgetError& e) {
    rec.status = std::string("budget: ") + e.what();
    return rec;
  }
  const DataFamily& fam = ps.family;
  const SpectralField& u0 = ps.u0;
  rec.grid = ps.grid;
  rec.norm_u0_Hs = norm(u0, Norm::hs(cfg.s));
  rec.norm_u0_FL1 = norm(u0, Norm::fl1());
  rec.norm_u0_L2 = norm(u0, Norm::l2());
  rec.t = ps.choice.t;
  rec.conditions = ps.choice.conditions;
  const Norm hs = Norm::hs(cfg.s);

  try {
    const auto window = output_window(fam, rec.grid);
    if (!window) throw ValidationError("output window holds no grid nodes");
    const SpectralField Ip = leading_iterate_closed(eq, u0, rec.t, *window);
    rec.norm_Ip_Hs = norm(Ip, hs);
    if (P.kind == ScenarioKind::BoussinesqCube) {
      rec.lower_bound_ratio = cosine_lower_bound(eq, u0, Ip, rec.t, rec.A);
      if (rec.lower_bound_ratio)
        rec.conditions.push_back({"cosine_lower_bound", *rec.lower_bound_ratio, 0.5, ">=", *rec.lower_bound_ratio >= 0.5});
    }

    int K_used = cfg.quadrature_K;
    auto compute = [&] {
      return converged_series(eq, u0, rec.t, n_max, cfg.quadrature_K, cfg.s, cfg.thresholds.quadrature_tol, K_used);
    };
    IterateSet set;
    if (options.cache_dir.empty()) {
      set = compute();
    } else {
      const std::string key = cache_key(cfg, eq, fam, rec.grid, rec.t, n_max, cfg.quadrature_K, cfg.thresholds.quadrature_tol);
      set = IterateCache(options.cache_dir).get_or_compute(key, eq, u0, compute);
      K_used = static_cast<int>(set.time_nodes.size());
    }
    rec.quadrature_K = K_used;
    rec.quadrature_defect = set.quadrature_defect;
    for (int n = 1; n <= n_max; ++n) {
      rec.level_Hs.push_back(set.norm(n, hs));
      rec.level_FL1.push_back(set.norm(n, Norm::fl1()));
    }
    rec.metric_series_Hs = norm(set.partial_sum(n_max), hs);

    double others = rec.level_Hs[0];
    for (int n = p + 1; n <= n_max; ++n) others += rec.level_Hs[n - 1];
    try {
      rec.series_tail_Hs = series_sum(set, hs, cfg.thresholds.series_decay).tail;
    } catch (const ConvergenceError&) {
      rec.series_tail_Hs = std::numeric_limits<double>::infinity();
      rec.status = "outside_convergence_regime";
    }
    const double lead = rec.level_Hs[p - 1];
    rec.dominance_ratio = lead > 0.0 ? (others + rec.series_tail_Hs) / lead : std::numeric_limits<double>::quiet_NaN();
    rec.leading_dominates = rec.dominance_ratio < cfg.thresholds.dominance;
  } catch (const ConvergenceError& e) {
    rec.status = std::string("quadrature: ") + e.what();
  } catch (const AliasingError& e) {
    rec.status = std::string("aliasing: ") + e.what();
  } catch (const BudgetError& e) {
    rec.status = std::string("budget: ") + e.what();
  }
  rec.cond_all_ok = std::all_of(rec.conditions.begin(), rec.conditions.end(), [](const Condition& c) { return c.satisfied; });
  return rec;
}

double fit_log_power(ScenarioKind kind) { return kind == ScenarioKind::Kawahara ? 2.0 : 0.0; }

ExponentFit fit_exponent(const std::vector<double>& N, const std::vector<double>& metric, double log_power) {
  if (N.size() != metric.size()) throw ValidationError("fit_exponent: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(N[i] > 1.0) || !(metric[i] > 0.0) || !std::isfinite(metric[i])) continue;
    const double logN = std::log(N[i]);
    x.push_back(logN);
    y.push_back(std::log(metric[i]) + log_power * std::log(logN));
  }
  if (x.size() < 4) throw ValidationError("fit_exponent needs at least 4 usable points, got " + std::to_string(x.size()));
  auto line = [](const std::vector<double>& xs, const std::vector<double>& ys, double& slope, double& icpt) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    slope = sxy / sxx;
    icpt = my - slope * mx;
  };
  ExponentFit fit;
  fit.points = static_cast<int>(x.size());
  line(x, y, fit.slope, fit.intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(x.size()));
  {
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] < x[smallest]) smallest = i;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != smallest) {
        xs.push_back(x[i]);
        ys.push_back(y[i]);
      }
    double slope = 0.0, icpt = 0.0;
    line(xs, ys, slope, icpt);
    fit.slope_without_smallest = slope;
  }
  return fit;
}

ExponentFit fit_exponent(const std::vector<ScenarioRecord>& records, double log_power) {
  std::vector<double> N, metric;
  for (const auto& r : records)
    if (r.usable_for_fit()) {
      N.push_back(r.N);
      metric.push_back(r.norm_Ip_Hs);
    }
  return fit_exponent(N, metric, log_power);
}

SweepResult sweep(const ScenarioConfig& cfg, const RunOptions& options) {
  validate_config(cfg);
  SweepResult res;
  res.config = cfg;
  const ScenarioKind kind = config_scenario_kind(cfg);
  res.scenario = to_string(kind);
  res.records.resize(cfg.N_list.size());

  const std::size_t jobs = cfg.N_list.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, options.threads ? options.threads : std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        res.records[i] = run_scenario(cfg, cfg.N_list[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  try {
    res.fit = fit_exponent(res.records, fit_log_power(kind));
  } catch (const ValidationError& e) {
    res.fit_error = e.what();
  }
  return res;
}

}  // namespace picardlab
