#ifndef TEFLOW_PIPELINE_HPP
#define TEFLOW_PIPELINE_HPP

/**
 * @file pipeline.hpp
 * @brief Universe configuration and the end-to-end analysis pipeline.
 *
 * A configuration is a JSON document naming the driver price file, the
 * analysis period, the analysis parameters and a universe CSV with one row
 * per firm:
 *
 *     ticker,price_file,btc_holdings,market_cap,latest_acquisition_date,rolling
 *
 * Relative paths resolve against the directory of the file that names them.
 * `latest_acquisition_date` may be empty (gamma is then not computed) and
 * `rolling` (0/1, optional column) flags firms for the rolling-window run.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/linear.hpp"
#include "teflow/rolling.hpp"
#include "teflow/timeseries.hpp"

namespace teflow {

struct FirmEntry {
    std::string ticker;
    std::filesystem::path price_file;
    double btc_holdings = 0.0;
    double market_cap = 0.0;  // same currency unit as the driver close
    std::optional<Date> latest_acquisition_date;
    bool rolling = false;
};

struct AnalysisParams {
    BinningSpec binning = TailQuantileBinning{};
    TeLags lags;
    std::size_t window = 252;
    std::size_t stride = 1;
    std::size_t n_shuffles = 1000;
    std::uint64_t seed = 0;
    std::optional<double> gamma_threshold;      // default: cross-sectional median
    std::optional<double> liquidity_threshold;  // default: cross-sectional median
    bool global_edges = false;
};

struct UniverseConfig {
    std::string driver_ticker = "BTC-USD";
    std::filesystem::path driver_price_file;
    Date start;
    Date end;
    std::optional<Date> rolling_start;  // rolling runs default to all available history
    std::optional<Date> rolling_end;
    std::vector<FirmEntry> firms;
    AnalysisParams params;
};

/// Reads the JSON configuration and its universe CSV. Every referenced file
/// must exist. Throws ConfigError for unusable settings and ParseError for
/// malformed files.
UniverseConfig load_config(const std::filesystem::path& path);
std::vector<FirmEntry> load_universe(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report contents

struct Warning {
    std::string ticker;
    std::string reason;
};

struct AmihudRow {
    double delta;
    double liquidity_score;
    std::size_t n_days;
    std::size_t n_skipped;
};

struct FirmRow {
    std::string ticker;
    double btc_holdings = 0.0;
    double market_cap = 0.0;
    std::size_t n_obs = 0;  // aligned observations
    DescriptiveStats stats{};
    LeadLagCorrelations corr{};
    SfmFit sfm{};
    std::optional<AmihudRow> amihud;  // empty when the price file has no volume
    double gamma = 0.0;                // NaN when it cannot be computed
    std::optional<Group> group;        // empty when liquidity is unknown
    std::optional<TeResult> te_xy;     // driver -> firm
    std::optional<TeResult> te_yx;     // firm -> driver
};

/// Cross-firm distribution of one measure; fields are NaN when undefined.
struct MeasureSummary {
    std::string measure;
    std::size_t n = 0;
    double mean;
    double median;
    double std;
    double skewness;
    double kurtosis;  // excess
};

struct RollingEntry {
    std::string ticker;
    RollingTeTrack xy;
    RollingTeTrack yx;
};

struct ReportBundle {
    std::string driver_ticker;
    std::string start;
    std::string end;
    std::string binning;
    TeLags lags;
    std::size_t n_shuffles = 0;
    std::uint64_t seed = 0;
    double gamma_threshold = 0.0;
    double liquidity_threshold = 0.0;
    std::optional<DescriptiveStats> driver_stats;
    std::optional<HoldingsSummary> holdings;
    std::vector<FirmRow> firms;
    std::vector<MeasureSummary> summary;
    std::vector<RollingEntry> rolling;
    std::vector<Warning> warnings;
};

struct PipelineOptions {
    unsigned threads = 1;
    bool transfer_entropy = true;
    bool rolling = true;
};

/// Runs every per-firm measure, the cross-sectional summary and the rolling
/// runs for flagged firms. Firms that fail to load or overlap the driver by
/// fewer than 30 dates become warnings. Output is independent of
/// options.threads. Throws ConfigError when no firm survives.
ReportBundle run_pipeline(const UniverseConfig& config, const PipelineOptions& options = {});

/// Summary statistics in the same convention as describe(), tolerant of short
/// or constant samples. NaN values are ignored.
MeasureSummary summarize_measure(std::string name, std::span<const double> values);

}  // namespace teflow

#endif  // TEFLOW_PIPELINE_HPP
