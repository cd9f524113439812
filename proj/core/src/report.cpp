#include "picardlab/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {

using nlohmann::ordered_json;

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& column) {
  // strtod rather than stod: subnormals set ERANGE but parse exactly.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || std::isspace(static_cast<unsigned char>(text.front())))
    throw ValidationError("column " + column + ": cannot parse '" + text + "'");
  return v;
}

// JSON has no inf/nan; those become strings.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

ordered_json record_to_json(const ScenarioRecord& r) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["N"] = num(r.N);
  j["A"] = num(r.A);
  j["theta"] = num(r.theta);
  j["t"] = num(r.t);
  j["norm_u0_Hs"] = num(r.norm_u0_Hs);
  j["norm_u0_FL1"] = num(r.norm_u0_FL1);
  j["norm_u0_L2"] = num(r.norm_u0_L2);
  j["norm_Ip_Hs"] = num(r.norm_Ip_Hs);
  j["metric_series_Hs"] = num(r.metric_series_Hs);
  j["dominance_ratio"] = num(r.dominance_ratio);
  j["leading_dominates"] = r.leading_dominates;
  j["cond_all_ok"] = r.cond_all_ok;
  j["status"] = r.status;
  j["grid"] = {{"dim", r.grid.dim}, {"extent", r.grid.extent}, {"points", r.grid.points}, {"spacing", r.grid.spacing}};
  j["n_max"] = r.n_max;
  j["quadrature_K"] = r.quadrature_K;
  j["quadrature_defect"] = r.quadrature_defect ? num(*r.quadrature_defect) : ordered_json(nullptr);
  ordered_json hs = ordered_json::array(), fl1 = ordered_json::array();
  for (double v : r.level_Hs) hs.push_back(num(v));
  for (double v : r.level_FL1) fl1.push_back(num(v));
  j["level_Hs"] = hs;
  j["level_FL1"] = fl1;
  j["series_tail_Hs"] = num(r.series_tail_Hs);
  j["lower_bound_ratio"] = r.lower_bound_ratio ? num(*r.lower_bound_ratio) : ordered_json(nullptr);
  ordered_json ledger = ordered_json::array();
  for (const auto& c : r.conditions)
    ledger.push_back({{"condition", c.name}, {"lhs", num(c.lhs)}, {"relation", c.relation}, {"rhs", num(c.rhs)},
                      {"satisfied", c.satisfied}});
  j["conditions"] = ledger;
  return j;
}

}  // namespace

const std::string& csv_header() {
  static const std::string h =
      "scenario,N,A,theta,t,norm_u0_Hs,norm_u0_FL1,norm_Ip_Hs,metric_series_Hs,dominance_ratio,cond_all_ok,status";
  return h;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::vector<ScenarioRecord>& records, std::ostream& out) {
  out << csv_header() << '\n';
  for (const auto& r : records) {
    out << csv_safe(r.scenario) << ',' << format_double(r.N) << ',' << format_double(r.A) << ','
        << format_double(r.theta) << ',' << format_double(r.t) << ',' << format_double(r.norm_u0_Hs) << ','
        << format_double(r.norm_u0_FL1) << ',' << format_double(r.norm_Ip_Hs) << ','
        << format_double(r.metric_series_Hs) << ',' << format_double(r.dominance_ratio) << ','
        << (r.cond_all_ok ? 1 : 0) << ',' << csv_safe(r.status) << '\n';
  }
}

std::vector<ScenarioRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw ValidationError("unexpected CSV header: " + line);
  std::vector<ScenarioRecord> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 12) throw ValidationError("CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected 12");
    ScenarioRecord r;
    r.scenario = cells[0];
    r.N = parse_double(cells[1], "N");
    r.A = parse_double(cells[2], "A");
    r.theta = parse_double(cells[3], "theta");
    r.t = parse_double(cells[4], "t");
    r.norm_u0_Hs = parse_double(cells[5], "norm_u0_Hs");
    r.norm_u0_FL1 = parse_double(cells[6], "norm_u0_FL1");
    r.norm_Ip_Hs = parse_double(cells[7], "norm_Ip_Hs");
    r.metric_series_Hs = parse_double(cells[8], "metric_series_Hs");
    r.dominance_ratio = parse_double(cells[9], "dominance_ratio");
    if (cells[10] != "0" && cells[10] != "1") throw ValidationError("cond_all_ok must be 0 or 1 in row " + std::to_string(row));
    r.cond_all_ok = cells[10] == "1";
    r.status = cells[11];
    out.push_back(std::move(r));
  }
  return out;
}

void write_record_json(const ScenarioRecord& record, std::ostream& out) { out << record_to_json(record).dump(2) << '\n'; }

void write_json(const SweepResult& result, std::ostream& out) {
  const ScenarioConfig& c = result.config;
  ordered_json j;
  j["scenario"] = result.scenario;
  ordered_json cfg;
  cfg["equation"] = c.equation;
  cfg["params"] = {{"d", c.dim},
                   {"alpha", c.equation_params.alpha},
                   {"p", c.equation_params.p},
                   {"m", c.equation_params.m},
                   {"b", c.equation_params.b},
                   {"beta", c.beta},
                   {"theta_reading", to_string(c.theta_reading)},
                   {"amplitude_scale", c.amplitude_scale},
                   {"perturbation_amplitude", c.perturbation_amplitude}};
  cfg["family"] = to_string(c.family);
  cfg["s"] = c.s;
  cfg["N_list"] = c.N_list;
  cfg["n_max"] = c.n_max;
  cfg["grid"] = {{"nodes_per_feature", c.grid.nodes_per_feature}, {"padding", c.grid.padding}, {"max_nodes", c.grid.max_nodes}};
  cfg["quadrature_K"] = c.quadrature_K;
  cfg["seed"] = c.seed;
  cfg["thresholds"] = {{"ll_factor", c.thresholds.ll_factor},
                       {"quadrature_tol", c.thresholds.quadrature_tol},
                       {"dominance", c.thresholds.dominance},
                       {"series_decay", c.thresholds.series_decay}};
  cfg["out_dir"] = c.out_dir;
  j["config"] = cfg;
  ordered_json recs = ordered_json::array();
  for (const auto& r : result.records) recs.push_back(record_to_json(r));
  j["records"] = recs;
  if (result.fit) {
    const auto& f = *result.fit;
    j["fit"] = {{"slope", num(f.slope)},
                {"intercept", num(f.intercept)},
                {"residual", num(f.residual)},
                {"points", f.points},
                {"slope_without_smallest", f.slope_without_smallest ? num(*f.slope_without_smallest) : ordered_json(nullptr)}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = result.fit_error;
  }
  out << j.dump(2) << '\n';
}

void write_svg(const std::vector<ScenarioRecord>& records, const std::optional<ExponentFit>& fit, double log_power,
               const std::string& title, std::ostream& out) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  std::vector<const ScenarioRecord*> pts;
  for (const auto& r : records)
    if (r.N > 1.0 && r.norm_Ip_Hs > 0.0 && std::isfinite(r.norm_Ip_Hs)) pts.push_back(&r);

  auto fitted = [&](double N) { return std::exp(fit->intercept + fit->slope * std::log(N)) / std::pow(std::log(N), log_power); };
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = ymin = std::numeric_limits<double>::infinity();
    xmax = ymax = -std::numeric_limits<double>::infinity();
    for (const auto* r : pts) {
      xmin = std::min(xmin, std::log10(r->N));
      xmax = std::max(xmax, std::log10(r->N));
      ymin = std::min(ymin, std::log10(r->norm_Ip_Hs));
      ymax = std::max(ymax, std::log10(r->norm_Ip_Hs));
      if (fit) {
        ymin = std::min(ymin, std::log10(fitted(r->N)));
        ymax = std::max(ymax, std::log10(fitted(r->N)));
      }
    }
  }
  if (xmax - xmin < 1e-9) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-9) { ymin -= 0.5; ymax += 0.5; }
  const double padx = 0.05 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
  xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
  auto X = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto Y = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };
  auto f2 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (const auto* r : pts) {
    const double x = X(std::log10(r->N));
    out << "<line x1=\"" << f2(x) << "\" y1=\"" << H - B << "\" x2=\"" << f2(x) << "\" y2=\"" << H - B + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << f2(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << format_double(r->N)
        << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double ly = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << L - 6 << "\" y=\"" << f2(Y(ly) + 4) << "\" text-anchor=\"end\">1e" << f2(ly) << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">N</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
      << ")\" text-anchor=\"middle\">||I_p(t)||_Hs</text>\n";
  if (fit && !pts.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (const auto* r : pts) out << f2(X(std::log10(r->N))) << ',' << f2(Y(std::log10(fitted(r->N)))) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 << "\" fill=\"#c0392b\">slope " << f2(fit->slope)
        << " (log power " << f2(log_power) << ", rms residual " << format_double(fit->residual) << ")</text>\n";
  }
  for (const auto* r : pts) {
    const bool solid = r->usable_for_fit();
    out << "<circle cx=\"" << f2(X(std::log10(r->N))) << "\" cy=\"" << f2(Y(std::log10(r->norm_Ip_Hs)))
        << "\" r=\"4\" stroke=\"#2c3e50\" fill=\"" << (solid ? "#2c3e50" : "white") << "\"/>\n";
  }
  out << "</svg>\n";
}

std::string write_sweep_outputs(const SweepResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir = result.config.out_dir.empty() ? fs::path(".") : fs::path(result.config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path csv = dir / (result.scenario + ".csv");
  {
    std::ofstream out(csv, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + csv.string());
    write_csv(result.records, out);
  }
  {
    std::ofstream out(dir / (result.scenario + ".json"), std::ios::binary | std::ios::trunc);
    write_json(result, out);
  }
  {
    std::ofstream out(dir / (result.scenario + ".svg"), std::ios::binary | std::ios::trunc);
    const double c = result.records.empty() ? 0.0 : fit_log_power(config_scenario_kind(result.config));
    write_svg(result.records, result.fit, c, result.scenario + ": " + result.config.equation, out);
  }
  return csv.string();
}

}  // namespace picardlab
