// Acceptance run: one PASS/FAIL line per criterion, each with its time budget.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "picardlab/oracles.hpp"
#include "picardlab/report.hpp"
#include "picardlab/scenario.hpp"
#include "picardlab/verify.hpp"

using namespace picardlab;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail = std::string("error: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("AC%-2d %s  %s  [%.2f s, budget %g s%s]\n      %s\n", id, ok ? "PASS" : "FAIL", name.c_str(), secs, budget_s,
              in_time ? "" : ", OVER BUDGET", o.detail.c_str());
  std::fflush(stdout);
}

Outcome from_check(const CheckResult& c) { return {c.passed, c.detail}; }

ScenarioConfig config(const std::string& json) { return parse_config(json); }

const char* kKawahara = R"json({"equation": "kawahara(1)", "family": "kawahara_window", "s": -2.5,
  "N_list": [32, 64, 128, 256, 512, 1024], "quadrature_K": 65, "seed": 11})json";
const char* kCube = R"json({"equation": "power_nls(2,2,0)", "family": "cube_pair", "s": -1.2, "params": {"d": 1},
  "N_list": [32, 64, 128, 256, 512, 1024], "seed": 11})json";
const char* kBoussinesqCubic = R"json({"equation": "boussinesq(3)", "family": "cube_pair", "s": -0.6, "params": {"d": 1},
  "N_list": [32, 64, 128, 256, 512], "seed": 11})json";

bool strictly_increasing(const std::vector<ScenarioRecord>& recs, std::string& trace) {
  bool ok = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    trace += (i ? " " : "") + fmt(recs[i].norm_Ip_Hs);
    if (i > 0 && !(recs[i].norm_Ip_Hs > recs[i - 1].norm_Ip_Hs)) ok = false;
  }
  return ok;
}

Outcome general_data_case(const ScenarioConfig& cfg, const std::vector<double>& Ns) {
  Outcome o{true, cfg.equation + ":"};
  // Compared in log space: the difference drops below the double range near N = 40.
  double prev = INFINITY;
  for (double N : Ns) {
    const PreparedScenario ps = prepare_scenario(cfg, N);
    GeneralDataOptions g;
    g.B = Norm::hs(cfg.s);
    g.init_norm = Norm::hs(cfg.s);
    g.perturbation_amplitude = cfg.perturbation_amplitude;
    g.n_max = ps.n_max;
    g.quadrature.nodes = cfg.quadrature_K;
    g.solver.steps = 40;
    const auto rep = general_data_experiment(ps.equation, ps.u0, N, ps.choice.t, g);
    const bool mono = rep.log_init_diff < prev;
    prev = rep.log_init_diff;
    o.passed = o.passed && rep.holds && mono;
    o.detail += " N=" + fmt(N) + (rep.holds ? "" : " inequality FAILED") + " log10 diff=" + fmt(rep.log_init_diff / std::log(10.0)) + (mono ? "" : " (not decreasing)");
  }
  return o;
}

}  // namespace

int main() {
  criterion(1, "sequence lemma, exact", 1, [] { return from_check(check_seq_a()); });
  criterion(2, "sequence bound b_n <= C0^(n-1), exact, n <= 40", 5, [] { return from_check(check_seq_bound()); });
  criterion(3, "convolution sandwich, d = 1, 2, r in {0.5, 1, 2}", 10, [] { return from_check(check_sandwich()); });
  criterion(4, "oracle agreement on G = 64: quadrature <= 1e-6, brute force <= 1e-10", 120,
            [] { return from_check(check_oracle_agreement()); });
  criterion(5, "iterate envelopes r_n <= 10 r_p, n <= p + 3(p-1)", 180,
            [] { return from_check(check_iterate_envelopes(builtin_suite(), false)); });

  criterion(6, "kawahara trend: slope 0.5 +- 0.15, dominance < 0.5 for N >= 2^8", 180, [] {
    const auto res = sweep(config(kKawahara));
    Outcome o{true, ""};
    if (!res.fit) return Outcome{false, "no fit: " + res.fit_error};
    const double slope = res.fit->slope;
    o.passed = std::abs(slope - 0.5) <= 0.15;
    o.detail = "log-corrected slope " + fmt(slope) + " (rms residual " + fmt(res.fit->residual) + "); dominance";
    for (const auto& r : res.records) {
      o.detail += " " + fmt(r.dominance_ratio);
      if (r.N >= 256 && !(r.dominance_ratio < 0.5)) o.passed = false;
      if (r.status != "ok") o.passed = false;
    }
    return o;
  });

  criterion(7, "model dispersive trend: metric grows, all conditions from N_min", 180, [] {
    const auto cfg = config(kCube);
    const double nmin = n_min(config_scenario(cfg));
    const auto res = sweep(cfg);
    Outcome o{std::isfinite(nmin) && nmin <= cfg.N_list.back(), "N_min = " + fmt(nmin) + "; |I_p|_Hs"};
    o.passed = strictly_increasing(res.records, o.detail) && o.passed;
    for (const auto& r : res.records)
      if (r.N >= nmin && !(r.cond_all_ok && r.status == "ok")) {
        o.passed = false;
        o.detail += "; conditions fail at N=" + fmt(r.N);
      }
    return o;
  });

  criterion(8, "boussinesq p = 3: cosine lower bound active, metric increasing", 180, [] {
    const auto res = sweep(config(kBoussinesqCubic));
    Outcome o{true, "|I_3|_Hs"};
    o.passed = strictly_increasing(res.records, o.detail);
    o.detail += "; lower-bound ratio (>= 0.5)";
    for (const auto& r : res.records) {
      const bool active = r.lower_bound_ratio && *r.lower_bound_ratio >= 0.5;
      o.detail += " " + (r.lower_bound_ratio ? fmt(*r.lower_bound_ratio) : std::string("none"));
      o.passed = o.passed && active && r.status == "ok";
    }
    return o;
  });

  criterion(9, "solver order >= 3.5 and series within tail, N = 2^4", 120, [] {
    Outcome o{true, ""};
    for (const auto& cfg : builtin_suite()) {
      for (const auto& c : {check_solver_order(cfg, 16.0), check_solver_vs_series(cfg, 16.0)}) {
        o.passed = o.passed && c.passed;
        o.detail += (o.detail.empty() ? "" : "\n      ") + c.name + (c.passed ? " ok: " : " FAILED: ") + c.detail;
      }
    }
    return o;
  });

  criterion(10, "general data: perturbation inequality, shrinking initial difference", 120, [] {
    Outcome o{true, ""};
    for (const auto& cfg : builtin_suite()) {
      const bool cubic_cube = config_scenario_kind(cfg) == ScenarioKind::BoussinesqCube;
      const auto c = general_data_case(cfg, cubic_cube ? std::vector<double>{16, 32, 64, 128} : std::vector<double>{4, 8, 16, 32});
      o.passed = o.passed && c.passed;
      o.detail += (o.detail.empty() ? "" : "\n      ") + c.detail;
    }
    return o;
  });

  criterion(11, "determinism: two sweeps, byte-identical CSV", 60, [] {
    const auto base = std::filesystem::temp_directory_path() / "picardlab_acceptance_det";
    std::filesystem::remove_all(base);
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
      auto cfg = builtin_suite().front();
      cfg.out_dir = (base / std::to_string(i)).string();
      std::filesystem::create_directories(cfg.out_dir);
      std::ifstream in(write_sweep_outputs(sweep(cfg)), std::ios::binary);
      text[i].assign(std::istreambuf_iterator<char>(in), {});
    }
    std::filesystem::remove_all(base);
    return Outcome{!text[0].empty() && text[0] == text[1], std::to_string(text[0].size()) + " bytes, identical: " + (text[0] == text[1] ? "yes" : "no")};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
