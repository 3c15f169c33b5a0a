#ifndef TEFLOW_TIMESERIES_HPP
#define TEFLOW_TIMESERIES_HPP

// Price and return series, calendar alignment, descriptive statistics.

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teflow {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

struct PriceObservation {
    Date date;
    double close;
    double dollar_volume;  // NaN when the source row had no volume
};

/// Dated closes and dollar volumes for one ticker. Validated on construction:
/// dates strictly increasing, closes positive and finite, volumes finite and
/// non-negative (or NaN for "not reported").
class PriceSeries {
public:
    PriceSeries(std::string ticker, std::vector<PriceObservation> observations);

    const std::string& ticker() const noexcept { return ticker_; }
    std::span<const PriceObservation> observations() const noexcept { return obs_; }
    std::size_t size() const noexcept { return obs_.size(); }
    bool has_volume() const noexcept;

    /// Observations with date in [first, last].
    PriceSeries slice(Date first, Date last) const;

private:
    std::string ticker_;
    std::vector<PriceObservation> obs_;
};

/// Dated log returns. Dates strictly increasing; values finite.
class ReturnSeries {
public:
    ReturnSeries(std::string ticker, std::vector<Date> dates, std::vector<double> values);

    const std::string& ticker() const noexcept { return ticker_; }
    std::span<const Date> dates() const noexcept { return dates_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Contiguous sub-series [offset, offset + count).
    ReturnSeries subseries(std::size_t offset, std::size_t count) const;

private:
    std::string ticker_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Driver (X) and target (Y) returns on one shared date grid.
class AlignedPair {
public:
    static constexpr std::size_t min_length = 30;

    AlignedPair(ReturnSeries driver, ReturnSeries target);

    const ReturnSeries& driver() const noexcept { return driver_; }
    const ReturnSeries& target() const noexcept { return target_; }
    std::span<const Date> dates() const noexcept { return driver_.dates(); }
    std::size_t size() const noexcept { return driver_.size(); }

    /// Same pair with driver and target exchanged.
    AlignedPair swapped() const { return AlignedPair(target_, driver_); }

private:
    ReturnSeries driver_;
    ReturnSeries target_;
};

struct DescriptiveStats {
    double mean;
    double median;
    double std;  // sample (n-1)
    std::optional<double> skewness;         // empty for zero-variance input
    std::optional<double> excess_kurtosis;  // empty for zero-variance input
    double min;
    double max;
    std::size_t n;
};

ReturnSeries log_returns(const PriceSeries& prices);

/// Restricts both series to their common dates. Returns are not recompounded
/// across dropped dates.
AlignedPair align(const ReturnSeries& x, const ReturnSeries& y);

DescriptiveStats describe(std::span<const double> values);
inline DescriptiveStats describe(const ReturnSeries& r) { return describe(r.values()); }

/// Median with the mean-of-central-pair rule for even lengths.
double median(std::span<const double> values);

enum class QuantileRule {
    Linear,              // h = (n-1)p, interpolate; R type 7
    InterpolatedEcdf,    // h = np, interpolate the empirical CDF; R type 4
    Midpoint,            // h = np - 1/2, interpolate; R type 5
};

/// p-quantile of an ascending-sorted, non-empty sample.
double quantile_sorted(std::span<const double> sorted, double p, QuantileRule rule);

}  // namespace teflow

#endif  // TEFLOW_TIMESERIES_HPP
