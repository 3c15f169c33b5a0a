#include "teflow/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

#include "teflow/errors.hpp"

namespace teflow {

namespace {

bool is_constant(std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double two_sided_t_pvalue(double rho, std::size_t n) {
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

}  // namespace

Star star_for(double p_value) {
    if (p_value <= 0.05) return Star::Double;
    if (p_value < 0.1) return Star::Single;
    return Star::None;
}

std::string_view to_string(Star s) {
    switch (s) {
        case Star::Double: return "**";
        case Star::Single: return "*";
        case Star::None: break;
    }
    return "";
}

std::string_view to_string(Group g) {
    switch (g) {
        case Group::HighBeta: return "HighBeta";
        case Group::LowBetaLiquid: return "LowBetaLiquid";
        case Group::LowBetaIlliquid: return "LowBetaIlliquid";
    }
    return "";
}

CorrResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthError("pearson: series lengths differ");
    if (x.size() < AlignedPair::min_length) {
        throw LengthError("pearson needs at least " + std::to_string(AlignedPair::min_length) + " observations");
    }
    if (is_constant(x) || is_constant(y)) {
        throw DegenerateInputError("pearson: zero variance in input series");
    }
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double p = two_sided_t_pvalue(rho, x.size());
    return CorrResult{rho, p, star_for(p), x.size()};
}

CorrResult pearson(const AlignedPair& pair) {
    return pearson(pair.driver().values(), pair.target().values());
}

LeadLagCorrelations lagged_pearson(const AlignedPair& pair) {
    if (pair.size() < AlignedPair::min_length + 1) {
        throw LengthError("lagged_pearson needs at least " + std::to_string(AlignedPair::min_length + 1) +
                          " observations");
    }
    const auto x = pair.driver().values();
    const auto y = pair.target().values();
    const std::size_t m = x.size() - 1;
    return LeadLagCorrelations{
        pearson(x, y),
        pearson(x.first(m), y.last(m)),
        pearson(x.last(m), y.first(m)),
    };
}

SfmFit sfm_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthError("sfm_fit: series lengths differ");
    if (x.size() < AlignedPair::min_length) {
        throw LengthError("sfm_fit needs at least " + std::to_string(AlignedPair::min_length) + " observations");
    }
    if (is_constant(x)) throw DegenerateInputError("sfm_fit: zero driver variance");

    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, sxy = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        sst += dy * dy;
    }
    SfmFit fit{};
    fit.n = x.size();
    fit.beta = sxy / sxx;
    fit.alpha = my - fit.beta * mx;
    if (is_constant(y) || sst == 0.0) {
        fit.r_squared = 0.0;
        return fit;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - fit.alpha - fit.beta * x[i];
        sse += e * e;
    }
    fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
    return fit;
}

SfmFit sfm_fit(const AlignedPair& pair) {
    return sfm_fit(pair.driver().values(), pair.target().values());
}

AmihudResult amihud(const PriceSeries& prices, const ReturnSeries& returns) {
    std::unordered_map<Date::rep, double> volume_by_day;
    volume_by_day.reserve(prices.size());
    for (const auto& o : prices.observations()) {
        volume_by_day.emplace(o.date.time_since_epoch().count(), o.dollar_volume);
    }

    AmihudResult out{};
    double sum = 0.0;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const Date d = returns.dates()[i];
        const auto it = volume_by_day.find(d.time_since_epoch().count());
        if (it == volume_by_day.end()) {
            throw DomainError("amihud: return date " + format_date(d) + " has no price row");
        }
        const double vol = it->second;
        if (std::isnan(vol) || vol <= 0.0) {
            ++out.n_skipped;
            continue;
        }
        sum += std::abs(returns.values()[i]) / vol;
        ++out.n_days;
    }
    if (out.n_days == 0) {
        throw DegenerateInputError("amihud: no matched day with positive dollar volume");
    }
    out.delta = sum / static_cast<double>(out.n_days);
    if (out.delta <= 0.0) {
        throw DegenerateInputError("amihud: every matched return is zero");
    }
    out.liquidity_score = std::abs(std::log(out.delta));
    return out;
}

Group classify(const FirmProfile& profile, double /*gamma_threshold*/, double liquidity_threshold) {
    if (profile.beta > 1.0) return Group::HighBeta;
    return profile.liquidity_score >= liquidity_threshold ? Group::LowBetaLiquid : Group::LowBetaIlliquid;
}

HoldingsSummary holdings_summary(std::span<const double> holdings) {
    if (holdings.empty()) throw LengthError("holdings_summary of empty list");
    std::vector<double> v(holdings.begin(), holdings.end());
    std::sort(v.begin(), v.end());
    constexpr auto rule = QuantileRule::InterpolatedEcdf;
    return HoldingsSummary{
        quantile_sorted(v, 0.25, rule), quantile_sorted(v, 0.5, rule), quantile_sorted(v, 0.75, rule),
        v.front(), v.back(),
    };
}

}  // namespace teflow
