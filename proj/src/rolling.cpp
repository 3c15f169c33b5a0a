#include "teflow/rolling.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "teflow/errors.hpp"
#include "teflow/parallel.hpp"
#include "teflow/rng.hpp"

namespace teflow {

SignificanceTier tier(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-value outside [0, 1]");
    if (p <= 0.01) return SignificanceTier::T1;
    if (p <= 0.05) return SignificanceTier::T2;
    if (p <= 0.1) return SignificanceTier::T3;
    return SignificanceTier::NS;
}

std::string_view to_string(SignificanceTier t) {
    switch (t) {
        case SignificanceTier::T1: return "T1";
        case SignificanceTier::T2: return "T2";
        case SignificanceTier::T3: return "T3";
        case SignificanceTier::NS: break;
    }
    return "NS";
}

std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride) {
    if (stride == 0) throw DomainError("stride must be at least 1");
    if (window == 0 || length < window) return 0;
    return (length - window) / stride + 1;
}

std::pair<RollingTeTrack, RollingTeTrack> rolling_te(const AlignedPair& pair, const RollingConfig& config) {
    if (config.window < min_rolling_window) {
        throw DomainError("rolling window must be at least " + std::to_string(min_rolling_window));
    }
    if (pair.size() < config.window) {
        throw LengthError("pair of length " + std::to_string(pair.size()) + " is shorter than the window " +
                          std::to_string(config.window));
    }
    const std::size_t n_windows = window_count(pair.size(), config.window, config.stride);

    std::optional<SymbolicSeries> global_x, global_y;
    if (config.global_edges) {
        global_x = discretize(pair.driver(), config.binning);
        global_y = discretize(pair.target(), config.binning);
    }

    RollingTeTrack xy{Direction::XtoY, config.window, config.stride, {}, config.n_shuffles, config.seed};
    RollingTeTrack yx{Direction::YtoX, config.window, config.stride, {}, config.n_shuffles, config.seed};
    xy.windows.resize(n_windows);
    yx.windows.resize(n_windows);

    const auto dx = pair.driver().values();
    const auto dy = pair.target().values();
    parallel_for(2 * n_windows, config.threads, [&](std::size_t task) {
        const std::size_t w = task / 2;
        const auto direction = task % 2 == 0 ? Direction::XtoY : Direction::YtoX;
        const std::size_t start = w * config.stride;

        auto symbolize = [&](std::span<const double> full, const std::optional<SymbolicSeries>& global) {
            if (global) return global->slice(start, config.window);
            return discretize(full.subspan(start, config.window), config.binning);
        };
        const SymbolicSeries sx = symbolize(dx, global_x);
        const SymbolicSeries sy = symbolize(dy, global_y);

        ShuffleTestConfig st;
        st.lags = config.lags;
        st.n_shuffles = config.n_shuffles;
        st.seed = derive_seed(config.seed, {start, static_cast<std::uint64_t>(direction)});
        st.threads = 1;
        const TeResult r = shuffle_test(sx, sy, st, direction);

        auto& slot = direction == Direction::XtoY ? xy.windows[w] : yx.windows[w];
        slot = RollingWindow{pair.dates()[start + config.window - 1], r.te_observed, r.p_value, tier(r.p_value)};
    });
    return {std::move(xy), std::move(yx)};
}

TrackSummary summarize(const RollingTeTrack& track) {
    const auto& w = track.windows;
    if (w.empty()) throw LengthError("cannot summarize an empty track");
    const double n = static_cast<double>(w.size());
    double sum = 0.0;
    std::size_t significant = 0;
    for (const auto& win : w) {
        sum += win.te;
        if (win.tier != SignificanceTier::NS) ++significant;
    }
    TrackSummary s{};
    s.n_windows = w.size();
    s.mean_te = sum / n;
    double ss = 0.0;
    for (const auto& win : w) ss += (win.te - s.mean_te) * (win.te - s.mean_te);
    s.std_te = w.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.n_significant_10pct = significant;
    s.fraction_significant = static_cast<double>(significant) / n;
    return s;
}

}  // namespace teflow
