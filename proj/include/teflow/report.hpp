#ifndef TEFLOW_REPORT_HPP
#define TEFLOW_REPORT_HPP

// Report emission. Every section goes to its own wide CSV, the plotting
// inputs go to long-format CSVs, and report.json mirrors all of it. Reals are
// written with 17 significant digits (CSV) or shortest round-trip form (JSON),
// so re-reading report.json reproduces the bundle bit for bit.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "teflow/pipeline.hpp"

namespace teflow {

std::string report_to_json(const ReportBundle& bundle);
ReportBundle report_from_json(const std::string& text);
ReportBundle read_report(const std::filesystem::path& json_path);

/// Writes firms.csv, te.csv, summary.csv, warnings.csv, fig7_scatter.csv,
/// fig8_rolling_long.csv, rolling_<ticker>.csv and report.json.
void write_report(const ReportBundle& bundle, const std::filesystem::path& out_dir);

/// Wide rolling-track rows: end_date,te_xy,p_xy,tier_xy,te_yx,p_yx,tier_yx.
void write_rolling_csv(std::ostream& out, const RollingTeTrack& xy, const RollingTeTrack& yx);

}  // namespace teflow

#endif  // TEFLOW_REPORT_HPP
