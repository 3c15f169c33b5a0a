#ifndef TEFLOW_SYNTHETIC_HPP
#define TEFLOW_SYNTHETIC_HPP

// Processes with known directional structure, and a literal reference
// evaluation of transfer entropy used to check the production estimator.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "teflow/entropy.hpp"
#include "teflow/timeseries.hpp"

namespace teflow::synth {

/// X and Y i.i.d. standard normal, mutually independent.
struct Independent {};

/// Y_t = X_{t-lag}.
struct Copy {
    std::uint32_t lag = 1;
};

/// Y_t = a * X_{t-1} + e_t, e_t ~ N(0, sigma_eps^2).
struct LinearCoupled {
    double a = 1.0;
    double sigma_eps = 1.0;
};

/// Y_t = sign(X_{t-lag}) in {-1, +1}, flipped with probability flip_prob.
struct ThresholdCoupled {
    std::uint32_t lag = 1;
    double flip_prob = 0.0;
};

using ProcessKind = std::variant<Independent, Copy, LinearCoupled, ThresholdCoupled>;

struct ProcessSpec {
    ProcessKind kind;
    std::size_t length = 1000;
    std::uint64_t seed = 0;
};

inline constexpr std::size_t min_process_length = 100;
inline constexpr std::size_t max_oracle_length = 10'000;

/// "independent", "copy:<lag>", "linear:<a>,<sigma>", "threshold:<lag>,<flip>".
ProcessKind parse_process(std::string_view text);
std::string to_string(const ProcessKind& kind);

/// Driver X, target Y on a daily calendar grid starting 2000-01-01.
/// Bit-identical for equal specs: X and the noise terms draw from separate
/// substreams of the seed, normals via Box-Muller.
AlignedPair generate(const ProcessSpec& spec);

/// Tabulates every (Y_{t+h}, Y_past, X_past) tuple in an ordered map and
/// evaluates E[log2 p(y_f | x_p, y_p) / p(y_f | y_p)] term by term. Slow;
/// shares nothing with transfer_entropy().
double brute_force_te(const SymbolicSeries& x, const SymbolicSeries& y, const TeLags& lags = {});

}  // namespace teflow::synth

#endif  // TEFLOW_SYNTHETIC_HPP
