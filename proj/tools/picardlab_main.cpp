#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "picardlab/equations.hpp"
#include "picardlab/error.hpp"
#include "picardlab/report.hpp"
#include "picardlab/scenario.hpp"
#include "picardlab/verify.hpp"

namespace {

using namespace picardlab;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumeric = 3;

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void print_check(const CheckResult& c) {
  std::printf("%s %-36s [%7.2fs] %s\n", c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL"), c.name.c_str(), c.seconds,
              c.detail.c_str());
}

nlohmann::ordered_json check_json(const CheckResult& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped}, {"seconds", c.seconds}, {"detail", c.detail}};
}

int cmd_verify(bool quick, std::uint64_t seed, const std::string& fault, const std::string& config_path) {
  VerifyOptions opt;
  opt.quick = quick;
  opt.seed = seed;
  if (!config_path.empty()) opt.suite.push_back(load_config(config_path));
  if (fault == "flip-modulation-sign") {
    fault::set_flip_modulation_sign(true);
  } else if (!fault.empty()) {
    throw ValidationError("unknown fault '" + fault + "'");
  }
  bool all = true;
  for (const auto& c : verify_suite(opt)) {
    print_check(c);
    all = all && c.passed;
  }
  std::printf("%s\n", all ? "verify: all checks passed" : "verify: FAILED");
  return all ? kOk : kNumeric;
}

int cmd_iterate(const std::string& config_path, double N, const std::string& cache, bool json) {
  const ScenarioConfig cfg = load_config(config_path);
  RunOptions opt;
  opt.cache_dir = cache;
  const ScenarioRecord rec = run_scenario(cfg, N, opt);
  if (json) {
    write_record_json(rec, std::cout);
  } else {
    write_csv({rec}, std::cout);
  }
  return rec.status == "ok" ? kOk : kNumeric;
}

int cmd_sweep(const std::string& config_path, const std::string& cache, unsigned threads) {
  const ScenarioConfig cfg = load_config(config_path);
  RunOptions opt;
  opt.cache_dir = cache;
  opt.threads = threads;
  const SweepResult res = sweep(cfg, opt);
  const std::string csv = write_sweep_outputs(res);
  bool numeric_ok = true;
  std::printf("%-16s %10s %12s %12s %10s %4s %s\n", "scenario", "N", "|I_p|_Hs", "dominance", "t", "cond", "status");
  for (const auto& r : res.records) {
    std::printf("%-16s %10s %12s %12s %10s %4s %s\n", r.scenario.c_str(), short_num(r.N).c_str(),
                short_num(r.norm_Ip_Hs).c_str(), short_num(r.dominance_ratio).c_str(), short_num(r.t).c_str(),
                r.cond_all_ok ? "ok" : "no", r.status.c_str());
    numeric_ok = numeric_ok && r.status == "ok";
  }
  if (res.fit) {
    std::printf("fitted exponent %.4f (rms residual %.3g, %d points", res.fit->slope, res.fit->residual, res.fit->points);
    if (res.fit->slope_without_smallest) std::printf(", %.4f without smallest N", *res.fit->slope_without_smallest);
    std::printf(")\n");
  } else {
    std::printf("no fit: %s\n", res.fit_error.c_str());
  }
  std::printf("wrote %s\n", csv.c_str());
  return numeric_ok ? kOk : kNumeric;
}

int cmd_oracle(const std::string& config_path) {
  const ScenarioConfig cfg = load_config(config_path);
  const OracleReport rep = oracle_checks(cfg);
  nlohmann::ordered_json j;
  j["scenario"] = rep.scenario;
  j["equation"] = cfg.equation;
  j["N"] = rep.N;
  j["passed"] = rep.passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    print_check(c);
    j["checks"].push_back(check_json(c));
  }
  const std::filesystem::path dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "oracle.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  std::printf("oracle at N=%s: %s\n", short_num(rep.N).c_str(), rep.passed() ? "all checks passed" : "FAILED");
  return rep.passed() ? kOk : kNumeric;
}

int cmd_report(const std::string& in_path, const std::string& plot_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + in_path + "'");
  const auto records = read_csv(in);
  if (records.empty()) throw ValidationError("'" + in_path + "' holds no records");
  const ScenarioKind kind = scenario_kind_from_string(records.front().scenario);
  const double c = fit_log_power(kind);
  std::optional<ExponentFit> fit;
  try {
    fit = fit_exponent(records, c);
    std::printf("fitted exponent %.4f (rms residual %.3g, %d points)\n", fit->slope, fit->residual, fit->points);
  } catch (const ValidationError& e) {
    std::printf("no fit: %s\n", e.what());
  }
  std::ofstream out(plot_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + plot_path + "'");
  write_svg(records, fit, c, records.front().scenario, out);
  std::printf("wrote %s\n", plot_path.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-inflation experiments on Picard iterates of dispersive equations"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run the lemma and cross-check suite");
  bool quick = false;
  std::uint64_t seed = 1;
  std::string fault_name, verify_config;
  verify->add_flag("--quick", quick, "Smaller samples and fewer N");
  verify->add_option("--seed", seed, "Sampling seed");
  verify->add_option("--inject-fault", fault_name, "Mutation check: flip-modulation-sign");
  verify->add_option("--config", verify_config, "Config used as the envelope suite instead of the built-in one");

  auto* iterate = app.add_subcommand("iterate", "One record for one N");
  std::string config_path, cache_dir;
  double N = 0.0;
  bool json = false;
  iterate->add_option("--config", config_path, "Scenario config (JSON)")->required();
  iterate->add_option("--N", N, "Dyadic frequency")->required();
  iterate->add_option("--cache", cache_dir, "Iterate cache directory");
  iterate->add_flag("--json", json, "Print the full record as JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "Records over N_list, fit, CSV/JSON/SVG");
  unsigned threads = 0;
  sweep_cmd->add_option("--config", config_path, "Scenario config (JSON)")->required();
  sweep_cmd->add_option("--cache", cache_dir, "Iterate cache directory");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* oracle = app.add_subcommand("oracle", "Independent cross-checks at the smallest N");
  oracle->add_option("--config", config_path, "Scenario config (JSON)")->required();

  auto* report = app.add_subcommand("report", "Plot a sweep CSV");
  std::string in_path, plot_path;
  report->add_option("--in", in_path, "Sweep CSV")->required();
  report->add_option("--plot", plot_path, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*verify) return cmd_verify(quick, seed, fault_name, verify_config);
    if (*iterate) return cmd_iterate(config_path, N, cache_dir, json);
    if (*sweep_cmd) return cmd_sweep(config_path, cache_dir, threads);
    if (*oracle) return cmd_oracle(config_path);
    if (*report) return cmd_report(in_path, plot_path);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumeric;
  }
  return kOk;
}
