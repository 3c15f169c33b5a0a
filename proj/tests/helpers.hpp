#ifndef TEFLOW_TESTS_HELPERS_HPP
#define TEFLOW_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/rng.hpp"
#include "teflow/timeseries.hpp"

namespace teflow::test {

inline Date day(int offset) { return *parse_date("2021-01-01") + std::chrono::days{offset}; }

inline std::vector<Date> day_grid(std::size_t n, int first = 0) {
    std::vector<Date> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = day(first + static_cast<int>(i));
    return d;
}

inline ReturnSeries returns_of(std::vector<double> v, std::string ticker = "T", int first = 0) {
    auto dates = day_grid(v.size(), first);
    return ReturnSeries(std::move(ticker), std::move(dates), std::move(v));
}

inline PriceSeries prices_of(const std::vector<double>& closes, double volume = 1e6, std::string ticker = "P") {
    std::vector<PriceObservation> obs;
    for (std::size_t i = 0; i < closes.size(); ++i) obs.push_back({day(static_cast<int>(i)), closes[i], volume});
    return PriceSeries(std::move(ticker), std::move(obs));
}

inline std::vector<double> normal_draws(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& e : v) e = scale * rng.normal();
    return v;
}

inline AlignedPair pair_of(std::vector<double> x, std::vector<double> y) {
    return AlignedPair(returns_of(std::move(x), "X"), returns_of(std::move(y), "Y"));
}

inline SymbolicSeries random_symbols(Rng& rng, std::size_t n, std::uint32_t q) {
    std::vector<Symbol> s(n);
    for (auto& e : s) e = static_cast<Symbol>(rng.below(q));
    return SymbolicSeries(std::move(s), q);
}

}  // namespace teflow::test

#endif
