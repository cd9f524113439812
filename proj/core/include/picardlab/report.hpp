#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "picardlab/scenario.hpp"

namespace picardlab {

/// "scenario,N,A,theta,t,norm_u0_Hs,norm_u0_FL1,norm_Ip_Hs,metric_series_Hs,dominance_ratio,cond_all_ok,status"
const std::string& csv_header();

/// %.17g, so a value survives a text round trip bit for bit.
std::string format_double(double v);

void write_csv(const std::vector<ScenarioRecord>& records, std::ostream& out);

/// Reads the columns written by write_csv; ValidationError on a wrong header
/// or a malformed row.
std::vector<ScenarioRecord> read_csv(std::istream& in);

/// Full records with condition ledgers, grids and per-level norms, plus the fit.
void write_json(const SweepResult& result, std::ostream& out);
void write_record_json(const ScenarioRecord& record, std::ostream& out);

/// Log-log plot of norm_Ip_Hs against N with the fitted law. Records not
/// usable for the fit are drawn hollow.
void write_svg(const std::vector<ScenarioRecord>& records, const std::optional<ExponentFit>& fit, double log_power,
               const std::string& title, std::ostream& out);

/// Writes <out_dir>/<scenario>.csv, .json and .svg; returns the CSV path.
std::string write_sweep_outputs(const SweepResult& result);

}  // namespace picardlab
