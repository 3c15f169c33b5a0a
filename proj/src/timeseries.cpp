#include "teflow/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "teflow/errors.hpp"

namespace teflow {

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        const char* first = text.data() + pos;
        const char* last = first + len;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) return std::nullopt;
        return v;
    };
    auto y = field(0, 4);
    auto m = field(5, 2);
    auto d = field(8, 2);
    if (!y || !m || !d) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                    std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

// ---------------------------------------------------------------------------

PriceSeries::PriceSeries(std::string ticker, std::vector<PriceObservation> observations)
    : ticker_(std::move(ticker)), obs_(std::move(observations)) {
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        const auto& o = obs_[i];
        if (i > 0 && !(obs_[i - 1].date < o.date)) {
            throw IntegrityError(ticker_ + ": dates not strictly increasing at " + format_date(o.date));
        }
        if (!std::isfinite(o.close) || o.close <= 0.0) {
            throw DomainError(ticker_ + ": non-positive or non-finite close on " + format_date(o.date));
        }
        if (!std::isnan(o.dollar_volume) && (!std::isfinite(o.dollar_volume) || o.dollar_volume < 0.0)) {
            throw DomainError(ticker_ + ": invalid dollar volume on " + format_date(o.date));
        }
    }
}

bool PriceSeries::has_volume() const noexcept {
    return std::any_of(obs_.begin(), obs_.end(), [](const auto& o) { return !std::isnan(o.dollar_volume); });
}

PriceSeries PriceSeries::slice(Date first, Date last) const {
    std::vector<PriceObservation> kept;
    for (const auto& o : obs_) {
        if (o.date >= first && o.date <= last) kept.push_back(o);
    }
    return PriceSeries(ticker_, std::move(kept));
}

ReturnSeries::ReturnSeries(std::string ticker, std::vector<Date> dates, std::vector<double> values)
    : ticker_(std::move(ticker)), dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw LengthError(ticker_ + ": date and value counts differ");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw IntegrityError(ticker_ + ": return dates not strictly increasing");
        }
        if (!std::isfinite(values_[i])) {
            throw DomainError(ticker_ + ": non-finite return on " + format_date(dates_[i]));
        }
    }
}

ReturnSeries ReturnSeries::subseries(std::size_t offset, std::size_t count) const {
    if (offset + count > values_.size()) throw LengthError("subseries out of range");
    auto d0 = dates_.begin() + static_cast<std::ptrdiff_t>(offset);
    auto v0 = values_.begin() + static_cast<std::ptrdiff_t>(offset);
    return ReturnSeries(ticker_, {d0, d0 + static_cast<std::ptrdiff_t>(count)},
                        {v0, v0 + static_cast<std::ptrdiff_t>(count)});
}

AlignedPair::AlignedPair(ReturnSeries driver, ReturnSeries target)
    : driver_(std::move(driver)), target_(std::move(target)) {
    if (!std::equal(driver_.dates().begin(), driver_.dates().end(), target_.dates().begin(),
                    target_.dates().end())) {
        throw IntegrityError("aligned pair requires identical date grids");
    }
    if (driver_.size() < min_length) {
        throw InsufficientOverlapError("aligned pair has " + std::to_string(driver_.size()) +
                                       " observations, need at least " + std::to_string(min_length));
    }
}

// ---------------------------------------------------------------------------

ReturnSeries log_returns(const PriceSeries& prices) {
    const auto obs = prices.observations();
    if (obs.size() < 2) {
        throw LengthError(prices.ticker() + ": log returns need at least 2 prices");
    }
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(obs.size() - 1);
    values.reserve(obs.size() - 1);
    for (std::size_t t = 1; t < obs.size(); ++t) {
        dates.push_back(obs[t].date);
        values.push_back(std::log(obs[t].close / obs[t - 1].close));
    }
    return ReturnSeries(prices.ticker(), std::move(dates), std::move(values));
}

AlignedPair align(const ReturnSeries& x, const ReturnSeries& y) {
    if (x.size() == 0 || y.size() == 0) {
        throw LengthError("align requires non-empty series");
    }
    std::vector<Date> dates;
    std::vector<double> xv, yv;
    const auto xd = x.dates();
    const auto yd = y.dates();
    std::size_t i = 0, j = 0;
    while (i < xd.size() && j < yd.size()) {
        if (xd[i] < yd[j]) {
            ++i;
        } else if (yd[j] < xd[i]) {
            ++j;
        } else {
            dates.push_back(xd[i]);
            xv.push_back(x.values()[i]);
            yv.push_back(y.values()[j]);
            ++i;
            ++j;
        }
    }
    if (dates.size() < AlignedPair::min_length) {
        throw InsufficientOverlapError(x.ticker() + "/" + y.ticker() + ": only " + std::to_string(dates.size()) +
                                       " common dates, need at least " +
                                       std::to_string(AlignedPair::min_length));
    }
    return AlignedPair(ReturnSeries(x.ticker(), dates, std::move(xv)),
                       ReturnSeries(y.ticker(), dates, std::move(yv)));
}

double median(std::span<const double> values) {
    if (values.empty()) throw LengthError("median of empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_sorted(std::span<const double> sorted, double p, QuantileRule rule) {
    if (sorted.empty()) throw LengthError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
    const std::size_t n = sorted.size();
    // h is a 0-based fractional position into the order statistics
    double h = 0.0;
    switch (rule) {
        case QuantileRule::Linear:
            h = static_cast<double>(n - 1) * p;
            break;
        case QuantileRule::InterpolatedEcdf:
            h = static_cast<double>(n) * p - 1.0;
            break;
        case QuantileRule::Midpoint:
            h = static_cast<double>(n) * p - 0.5;
            break;
    }
    if (h <= 0.0) return sorted.front();
    if (h >= static_cast<double>(n - 1)) return sorted.back();
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DescriptiveStats describe(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw LengthError("describe needs at least 4 observations");

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    DescriptiveStats s{};
    s.n = n;
    s.min = *lo;
    s.max = *hi;
    s.median = median(values);

    const double nd = static_cast<double>(n);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / nd;
    if (*lo == *hi) {
        // skewness and kurtosis are undefined
        s.mean = *lo;
        s.std = 0.0;
        return s;
    }

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.std = std::sqrt(m2 / (nd - 1.0));
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;

    // adjusted Fisher-Pearson G1 and small-sample excess kurtosis G2
    const double g1 = m3 / std::pow(m2, 1.5);
    const double g2 = m4 / (m2 * m2) - 3.0;
    s.skewness = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
    s.excess_kurtosis = ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    return s;
}

}  // namespace teflow
