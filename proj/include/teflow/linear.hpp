#ifndef TEFLOW_LINEAR_HPP
#define TEFLOW_LINEAR_HPP

// Linear dependence battery: Pearson lead-lag correlations, the single-factor
// regression, Amihud illiquidity, and the three-group firm classification.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/timeseries.hpp"

namespace teflow {

enum class Star { None, Single, Double };

/// ** for p <= 0.05, * for 0.05 < p < 0.1.
Star star_for(double p_value);
std::string_view to_string(Star s);

struct CorrResult {
    double rho;
    double p_value;  // two-sided t-test, n-2 degrees of freedom
    Star star;
    std::size_t n;
};

struct LeadLagCorrelations {
    CorrResult same_day;        // rho(X_t, Y_t)
    CorrResult driver_leads;    // rho(X_{t-1}, Y_t)
    CorrResult target_leads;    // rho(X_t, Y_{t-1})
};

/// Single-factor fit  y_t = alpha + beta * x_t + e_t.
struct SfmFit {
    double alpha;
    double beta;
    double r_squared;
    std::size_t n;
};

struct AmihudResult {
    double delta;            // mean |r_t| / dollar_volume_t
    double liquidity_score;  // |ln delta|
    std::size_t n_days;      // days that entered the mean
    std::size_t n_skipped;   // matched days with zero or missing volume
};

enum class Group { HighBeta, LowBetaLiquid, LowBetaIlliquid };
std::string_view to_string(Group g);

struct FirmProfile {
    std::string ticker;
    double btc_holdings = 0.0;
    double market_cap = 0.0;
    double gamma = 0.0;  // holdings value / market cap at the latest acquisition date
    double beta = 0.0;
    double rho_same_day = 0.0;
    double amihud_delta = 0.0;
    double liquidity_score = 0.0;
};

struct HoldingsSummary {
    double q1;
    double median;
    double q3;
    double min;
    double max;
};

/// Correlation of two equal-length spans (at least AlignedPair::min_length).
CorrResult pearson(std::span<const double> x, std::span<const double> y);
CorrResult pearson(const AlignedPair& pair);

LeadLagCorrelations lagged_pearson(const AlignedPair& pair);

/// OLS of target on driver with intercept.
SfmFit sfm_fit(const AlignedPair& pair);
SfmFit sfm_fit(std::span<const double> x, std::span<const double> y);

/// Amihud ratio over the return dates, matched against `prices` by date.
/// Every return date must exist in `prices`.
AmihudResult amihud(const PriceSeries& prices, const ReturnSeries& returns);

/// beta > 1 -> HighBeta; otherwise the liquidity score decides. gamma_threshold
/// does not enter the rule; it is accepted so callers can report it next to
/// the group.
Group classify(const FirmProfile& profile, double gamma_threshold, double liquidity_threshold);

/// Quartiles by interpolating the empirical CDF between order statistics.
HoldingsSummary holdings_summary(std::span<const double> holdings);

}  // namespace teflow

#endif  // TEFLOW_LINEAR_HPP
