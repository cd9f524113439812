#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "picardlab/cache.hpp"
#include "picardlab/error.hpp"
#include "picardlab/report.hpp"
#include "picardlab/scenario.hpp"

using namespace picardlab;

namespace {

const char* kBase = R"json({"equation": "nls_uu", "family": "cube_pair", "s": -1.2, "params": {"d": 1},
                           "N_list": [32, 64, 128, 256], "seed": 7})json";

nlohmann::json base() { return nlohmann::json::parse(kBase); }

ScenarioConfig with(const std::function<void(nlohmann::json&)>& edit) {
  auto j = base();
  edit(j);
  return parse_config(j.dump());
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("picardlab_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, ParsesDefaults) {
  const auto cfg = parse_config(kBase);
  EXPECT_EQ(cfg.equation, "nls_uu");
  EXPECT_EQ(cfg.family, FamilyKind::CubePair);
  EXPECT_EQ(cfg.N_list.size(), 4u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(effective_n_max(cfg), 4);
  EXPECT_EQ(config_scenario_kind(cfg), ScenarioKind::DispersiveCube);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(with([](auto& j) { j["extra"] = 1; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["params"]["gamma"] = 1; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["thresholds"] = {{"fudge", 1.0}}; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["s"] = "low"; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["quadrature_K"] = 1.5; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["seed"] = -1; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j.erase("family"); }), ValidationError);
  EXPECT_THROW(parse_config("{not json"), ValidationError);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(with([](auto& j) { j["N_list"] = {32, 48}; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["N_list"] = {64, 32}; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["quadrature_K"] = 10; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["n_max"] = 2; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["s"] = -0.2; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["family"] = "kawahara_window"; }), ValidationError);
  EXPECT_THROW(with([](auto& j) { j["thresholds"] = {{"series_decay", 1.0}}; }), ValidationError);
}

TEST(Fit, RecoversExactPowerLaw) {
  std::vector<double> N, m;
  for (int k = 5; k <= 10; ++k) {
    N.push_back(std::ldexp(1.0, k));
    m.push_back(3.0 * std::sqrt(N.back()));
  }
  const auto f = fit_exponent(N, m, 0.0);
  EXPECT_NEAR(f.slope, 0.5, 1e-12);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
  ASSERT_TRUE(f.slope_without_smallest.has_value());
  EXPECT_NEAR(*f.slope_without_smallest, 0.5, 1e-12);
}

TEST(Fit, LogCorrectionIsRemoved) {
  std::vector<double> N, m;
  for (int k = 5; k <= 12; ++k) {
    N.push_back(std::ldexp(1.0, k));
    m.push_back(std::pow(N.back(), 0.3) / std::pow(std::log(N.back()), 0.75));
  }
  EXPECT_NEAR(fit_exponent(N, m, 0.75).slope, 0.3, 1e-12);
  EXPECT_GT(std::abs(fit_exponent(N, m, 0.0).slope - 0.3), 1e-3);
}

TEST(Fit, NeedsFourUsablePoints) {
  EXPECT_THROW(fit_exponent(std::vector<double>{2, 4, 8}, std::vector<double>{1, 2, 3}, 0.0), ValidationError);
  std::vector<ScenarioRecord> recs(5);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].N = std::ldexp(1.0, int(i) + 3);
    recs[i].norm_Ip_Hs = recs[i].N;
    recs[i].cond_all_ok = i != 2;
  }
  recs[0].status = "convergence: ratio";
  EXPECT_THROW(fit_exponent(recs, 0.0), ValidationError);
  recs[2].cond_all_ok = true;
  EXPECT_EQ(fit_exponent(recs, 0.0).points, 4);
}

TEST(Csv, RoundTripsBitForBit) {
  ScenarioRecord r;
  r.scenario = "dispersive_cube";
  r.N = 64;
  r.A = 0.1 + 0.2;
  r.theta = 1.0 / 3.0;
  r.t = 1e-300;
  r.norm_u0_Hs = std::nextafter(1.0, 2.0);
  r.norm_u0_FL1 = 5e-324;
  r.norm_Ip_Hs = 123456.789;
  r.metric_series_Hs = 2.0;
  r.dominance_ratio = NAN;
  r.cond_all_ok = true;
  r.status = "convergence: a, b\nc";
  std::stringstream ss;
  write_csv({r}, ss);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header());
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].A, r.A);
  EXPECT_EQ(back[0].theta, r.theta);
  EXPECT_EQ(back[0].t, r.t);
  EXPECT_EQ(back[0].norm_u0_Hs, r.norm_u0_Hs);
  EXPECT_EQ(back[0].norm_u0_FL1, r.norm_u0_FL1);
  EXPECT_TRUE(std::isnan(back[0].dominance_ratio));
  EXPECT_TRUE(back[0].cond_all_ok);
  EXPECT_EQ(back[0].status.find(','), std::string::npos);
  std::stringstream again;
  write_csv(back, again);
  EXPECT_EQ(again.str(), text);
}

TEST(Csv, RejectsWrongHeader) {
  std::stringstream ss("scenario,N\nx,1\n");
  EXPECT_THROW(read_csv(ss), ValidationError);
}

TEST(Run, ZeroAmplitudeGivesZeros) {
  const auto cfg = with([](auto& j) { j["params"]["amplitude_scale"] = 0.0; });
  const auto r = run_scenario(cfg, 32.0);
  EXPECT_EQ(r.norm_u0_Hs, 0.0);
  EXPECT_EQ(r.norm_Ip_Hs, 0.0);
  EXPECT_EQ(r.metric_series_Hs, 0.0);
  EXPECT_TRUE(std::isnan(r.dominance_ratio));
}

TEST(Run, UnsatisfiedConditionExcludesFromFit) {
  const auto cfg = parse_config(kBase);
  for (double N : {32.0, 64.0}) {
    const auto r = run_scenario(cfg, N);
    bool all = !r.conditions.empty();
    for (const auto& c : r.conditions) all = all && c.satisfied;
    EXPECT_EQ(r.cond_all_ok, all);
    EXPECT_EQ(r.usable_for_fit(), all && r.status == "ok");
    EXPECT_EQ(r.leading_dominates, r.dominance_ratio < cfg.thresholds.dominance);
  }
}

TEST(Sweep, DeterministicAndCacheTransparent) {
  auto cfg = parse_config(kBase);
  cfg.N_list = {32, 64, 128, 256};
  const auto dir = scratch("cache");
  RunOptions plain;
  plain.threads = 2;
  RunOptions cached = plain;
  cached.cache_dir = dir.string();
  std::stringstream a, b, c;
  write_csv(sweep(cfg, plain).records, a);
  write_csv(sweep(cfg, cached).records, b);
  write_csv(sweep(cfg, cached).records, c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST(Cache, IterateSetRoundTrip) {
  const auto cfg = parse_config(kBase);
  const auto ps = prepare_scenario(cfg, 32.0);
  const auto set = iterate_series(ps.equation, ps.u0, ps.choice.t, ps.n_max);
  std::stringstream ss;
  write_iterate_set(set, "k1", ss);
  const std::string text = ss.str();
  std::stringstream in(text);
  const auto back = read_iterate_set(in, "k1", ps.equation, ps.u0);
  for (int n = 1; n <= ps.n_max; ++n) {
    const auto va = set.iterate(n).values(), vb = back.iterate(n).values();
    ASSERT_EQ(va.size(), vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) ASSERT_EQ(va[i], vb[i]);
  }
  std::stringstream wrong(text);
  EXPECT_THROW(read_iterate_set(wrong, "k2", ps.equation, ps.u0), Error);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Report, WritesAllOutputs) {
  auto cfg = parse_config(kBase);
  const auto dir = scratch("out");
  cfg.out_dir = dir.string();
  const auto result = sweep(cfg);
  const std::string csv = write_sweep_outputs(result);
  EXPECT_TRUE(std::filesystem::exists(csv));
  for (const char* ext : {".json", ".svg"}) {
    auto p = std::filesystem::path(csv).replace_extension(ext);
    EXPECT_TRUE(std::filesystem::exists(p)) << p;
  }
  std::ifstream j(std::filesystem::path(csv).replace_extension(".json"));
  const auto doc = nlohmann::json::parse(j);
  EXPECT_EQ(doc.at("records").size(), 4u);
  std::filesystem::remove_all(dir);
}
