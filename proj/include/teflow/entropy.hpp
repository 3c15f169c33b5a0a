#ifndef TEFLOW_ENTROPY_HPP
#define TEFLOW_ENTROPY_HPP

// Symbolization, Shannon entropy, plug-in transfer entropy and the
// driver-shuffle significance test.

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "teflow/timeseries.hpp"

namespace teflow {

using Symbol = std::uint32_t;

/// Discretized series over the alphabet [0, q).
class SymbolicSeries {
public:
    /// `bin_edges` is either empty (symbols given directly) or holds q-1
    /// strictly increasing thresholds.
    SymbolicSeries(std::vector<Symbol> symbols, std::uint32_t q, std::vector<double> bin_edges = {});

    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    std::uint32_t alphabet_size() const noexcept { return q_; }
    std::span<const double> bin_edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return symbols_.size(); }

    /// Contiguous sub-series; keeps alphabet and edges.
    SymbolicSeries slice(std::size_t offset, std::size_t count) const;

private:
    std::vector<Symbol> symbols_;
    std::uint32_t q_;
    std::vector<double> edges_;
};

/// Edges at the k/q empirical quantiles, k = 1..q-1.
struct QuantileBinning {
    std::uint32_t q = 2;
};

/// Three symbols split at the lower and upper percentiles of the series.
struct TailQuantileBinning {
    double lower_pct = 5.0;
    double upper_pct = 95.0;
};

using BinningSpec = std::variant<QuantileBinning, TailQuantileBinning>;

/// Parses "quantile:<q>" or "tail:<lower>,<upper>".
BinningSpec parse_binning(std::string_view text);
std::string to_string(const BinningSpec& spec);

/// Values strictly below an edge go to the lower bin; values equal to an edge
/// go to the upper bin. Edges are midpoint-rule empirical quantiles, so each
/// tail holds n * pct / 100 values to within half an observation.
SymbolicSeries discretize(std::span<const double> values, const BinningSpec& spec);
inline SymbolicSeries discretize(const ReturnSeries& r, const BinningSpec& spec) {
    return discretize(r.values(), spec);
}

/// Entropy in bits of a frequency table; zero cells contribute nothing.
double shannon_entropy(std::span<const std::uint64_t> counts);

/// Embedding: driver lags j, target lags k, prediction horizon h.
struct TeLags {
    std::uint32_t driver = 1;
    std::uint32_t target = 1;
    std::uint32_t horizon = 1;

    friend bool operator==(const TeLags&, const TeLags&) = default;
};

/// Minimum of  length - max(j, k) - h  accepted by the estimators.
inline constexpr std::size_t min_effective_samples = 20;

/// Plug-in T(X->Y) = H(Y_{t+h} | Y_past) - H(Y_{t+h} | X_past, Y_past), bits.
/// Y_past = (Y_t, ..., Y_{t-k+1}), X_past = (X_t, ..., X_{t-j+1}).
double transfer_entropy(const SymbolicSeries& x, const SymbolicSeries& y, const TeLags& lags = {});

enum class Direction { XtoY, YtoX };
std::string_view to_string(Direction d);

struct TeResult {
    double te_observed = 0.0;
    double p_value = 1.0;
    double null_mean = 0.0;
    double null_std = 0.0;  // sample standard deviation of the shuffled values
    double effective_te = 0.0;
    std::size_t n_shuffles = 0;
    Direction direction = Direction::XtoY;
    TeLags lags;
};

struct ShuffleTestConfig {
    TeLags lags;
    std::size_t n_shuffles = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

inline constexpr std::size_t min_shuffles = 100;

/// Permutes the driver's time indices n_shuffles times to build a null
/// distribution. Shuffle i draws from the substream derive_seed(seed, {i}), so
/// the result is identical for every thread count. For Direction::YtoX the
/// roles of x and y are exchanged.
TeResult shuffle_test(const SymbolicSeries& x, const SymbolicSeries& y, const ShuffleTestConfig& config,
                      Direction direction = Direction::XtoY);

}  // namespace teflow

#endif  // TEFLOW_ENTROPY_HPP
