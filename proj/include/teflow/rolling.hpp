#ifndef TEFLOW_ROLLING_HPP
#define TEFLOW_ROLLING_HPP

/**
 * @file rolling.hpp
 * @brief Rolling-window transfer entropy in both directions.
 *
 * Window w covers observations [w * stride, w * stride + window) of the
 * aligned pair and is reported by the date of its last observation. Each
 * window is a self-contained test: returns are symbolized with edges fitted
 * inside the window (unless global edges are requested) and the shuffle test
 * runs with a seed derived from (seed, start offset, direction). Because the
 * seed depends on the start offset rather than the window ordinal, a stride-s
 * track is exactly every s-th window of the stride-1 track.
 */

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/timeseries.hpp"

namespace teflow {

enum class SignificanceTier { T1, T2, T3, NS };

/// T1: p <= 0.01, T2: 0.01 < p <= 0.05, T3: 0.05 < p <= 0.1, NS otherwise.
SignificanceTier tier(double p);
std::string_view to_string(SignificanceTier t);

struct RollingWindow {
    Date end_date;
    double te;
    double p_value;
    SignificanceTier tier;

    friend bool operator==(const RollingWindow&, const RollingWindow&) = default;
};

struct RollingTeTrack {
    Direction direction = Direction::XtoY;
    std::size_t window_length = 0;
    std::size_t stride = 1;
    std::vector<RollingWindow> windows;
    std::size_t n_shuffles = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const RollingTeTrack&, const RollingTeTrack&) = default;
};

struct TrackSummary {
    double mean_te;
    double std_te;  // sample standard deviation; 0 for a single window
    std::size_t n_windows;
    std::size_t n_significant_10pct;
    double fraction_significant;
};

struct RollingConfig {
    std::size_t window = 252;
    std::size_t stride = 1;
    BinningSpec binning = TailQuantileBinning{};
    TeLags lags;
    std::size_t n_shuffles = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool global_edges = false;  // fit bin edges once on the full series
};

inline constexpr std::size_t min_rolling_window = 100;

/// floor((length - window) / stride) + 1, or 0 when length < window.
std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride);

/// Tracks X->Y and Y->X, in that order.
std::pair<RollingTeTrack, RollingTeTrack> rolling_te(const AlignedPair& pair, const RollingConfig& config);

TrackSummary summarize(const RollingTeTrack& track);

}  // namespace teflow

#endif  // TEFLOW_ROLLING_HPP
