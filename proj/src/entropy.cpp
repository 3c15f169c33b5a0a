#include "teflow/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "teflow/errors.hpp"
#include "teflow/parallel.hpp"
#include "teflow/rng.hpp"

namespace teflow {

SymbolicSeries::SymbolicSeries(std::vector<Symbol> symbols, std::uint32_t q, std::vector<double> bin_edges)
    : symbols_(std::move(symbols)), q_(q), edges_(std::move(bin_edges)) {
    if (q_ < 2) throw DomainError("alphabet size must be at least 2");
    for (Symbol s : symbols_) {
        if (s >= q_) throw DomainError("symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(q_));
    }
    if (!edges_.empty()) {
        if (edges_.size() != q_ - 1) throw DomainError("expected q-1 bin edges");
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            if (!(edges_[i - 1] < edges_[i])) throw DomainError("bin edges must be strictly increasing");
        }
    }
}

SymbolicSeries SymbolicSeries::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > symbols_.size()) throw LengthError("symbol slice out of range");
    auto first = symbols_.begin() + static_cast<std::ptrdiff_t>(offset);
    return SymbolicSeries({first, first + static_cast<std::ptrdiff_t>(count)}, q_, edges_);
}

// ---------------------------------------------------------------------------
// Binning

namespace {

double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

BinningSpec parse_binning(std::string_view text) {
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    const auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (kind == "quantile") {
        const double q = parse_number(args, "quantile count");
        if (q < 2 || q != std::floor(q)) throw DomainError("quantile binning needs an integer q >= 2");
        return QuantileBinning{static_cast<std::uint32_t>(q)};
    }
    if (kind == "tail") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw DomainError("tail binning expects 'tail:<lower>,<upper>'");
        TailQuantileBinning spec{parse_number(args.substr(0, comma), "lower percentile"),
                                 parse_number(args.substr(comma + 1), "upper percentile")};
        if (!(spec.lower_pct > 0.0 && spec.lower_pct < spec.upper_pct && spec.upper_pct < 100.0)) {
            throw DomainError("tail percentiles must satisfy 0 < lower < upper < 100");
        }
        return spec;
    }
    throw DomainError("unknown binning '" + std::string(text) + "'");
}

std::string to_string(const BinningSpec& spec) {
    if (const auto* q = std::get_if<QuantileBinning>(&spec)) return "quantile:" + std::to_string(q->q);
    const auto& t = std::get<TailQuantileBinning>(spec);
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };
    return "tail:" + fmt(t.lower_pct) + "," + fmt(t.upper_pct);
}

SymbolicSeries discretize(std::span<const double> values, const BinningSpec& spec) {
    if (values.size() < AlignedPair::min_length) {
        throw LengthError("discretize needs at least " + std::to_string(AlignedPair::min_length) + " values");
    }
    std::vector<double> probs;
    if (const auto* q = std::get_if<QuantileBinning>(&spec)) {
        if (q->q < 2) throw DomainError("quantile binning needs q >= 2");
        for (std::uint32_t k = 1; k < q->q; ++k) probs.push_back(static_cast<double>(k) / q->q);
    } else {
        const auto& t = std::get<TailQuantileBinning>(spec);
        if (!(t.lower_pct > 0.0 && t.lower_pct < t.upper_pct && t.upper_pct < 100.0)) {
            throw DomainError("tail percentiles must satisfy 0 < lower < upper < 100");
        }
        probs = {t.lower_pct / 100.0, t.upper_pct / 100.0};
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    edges.reserve(probs.size());
    for (double p : probs) {
        const double e = quantile_sorted(sorted, p, QuantileRule::Midpoint);
        if (!edges.empty() && !(edges.back() < e)) {
            throw DegenerateInputError("degenerate bin edge " + std::to_string(edges.size()) + " at value " +
                                       std::to_string(e) + ": ties collapse a bin to zero width");
        }
        edges.push_back(e);
    }

    std::vector<Symbol> symbols(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        symbols[i] = static_cast<Symbol>(std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    }
    const auto q = static_cast<std::uint32_t>(edges.size() + 1);
    return SymbolicSeries(std::move(symbols), q, std::move(edges));
}

// ---------------------------------------------------------------------------
// Entropy

double shannon_entropy(std::span<const std::uint64_t> counts) {
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total == 0) throw LengthError("entropy of an empty frequency table");
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

std::string_view to_string(Direction d) {
    return d == Direction::XtoY ? "XtoY" : "YtoX";
}

namespace {

constexpr std::uint64_t dense_limit = std::uint64_t{1} << 20;

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (r > (std::uint64_t{1} << 62) / base) throw DomainError("embedding state space too large");
        r *= base;
    }
    return r;
}

/// Joint-state encoder and counter for one target series. The target-only
/// entropies are fixed, so driver shuffles only re-count the two joint tables.
class TeEstimator {
public:
    TeEstimator(const SymbolicSeries& y, std::uint32_t driver_alphabet, const TeLags& lags)
        : lags_(lags), n_(y.size()) {
        if (lags.driver == 0 || lags.target == 0 || lags.horizon == 0) {
            throw DomainError("lags and horizon must be at least 1");
        }
        const std::size_t m = std::max(lags.driver, lags.target);
        if (n_ < m + lags.horizon || n_ - m - lags.horizon < min_effective_samples) {
            throw LengthError("transfer entropy needs length - max(j,k) - h >= " +
                              std::to_string(min_effective_samples));
        }
        first_ = m - 1;
        samples_ = n_ - m - lags.horizon + 1;

        const std::uint64_t qy = y.alphabet_size();
        card_yp_ = checked_pow(qy, lags.target);
        card_xp_ = checked_pow(driver_alphabet, lags.driver);
        card_yf_yp_ = card_yp_ * qy;
        if (card_yf_yp_ > (std::uint64_t{1} << 62) / card_xp_) throw DomainError("embedding state space too large");
        card_all_ = card_yf_yp_ * card_xp_;

        clogc_.resize(samples_ + 1);
        clogc_[0] = 0.0;
        for (std::size_t c = 1; c <= samples_; ++c) {
            const double cd = static_cast<double>(c);
            clogc_[c] = cd * std::log2(cd);
        }

        const auto ys = y.symbols();
        yp_.resize(samples_);
        yf_yp_.resize(samples_);
        for (std::size_t s = 0; s < samples_; ++s) {
            const std::size_t t = first_ + s;
            std::uint64_t key = 0;
            for (std::uint32_t i = 0; i < lags.target; ++i) key = key * qy + ys[t - i];
            yp_[s] = key;
            yf_yp_[s] = ys[t + lags.horizon] * card_yp_ + key;
        }
        std::vector<std::uint32_t> scratch;
        h_yp_ = entropy_of(yp_, card_yp_, scratch);
        h_yf_yp_ = entropy_of(yf_yp_, card_yf_yp_, scratch);
    }

    double evaluate(std::span<const Symbol> xs, std::uint32_t qx, std::vector<std::uint64_t>& keys_a,
                    std::vector<std::uint64_t>& keys_b, std::vector<std::uint32_t>& scratch) const {
        keys_a.resize(samples_);
        keys_b.resize(samples_);
        for (std::size_t s = 0; s < samples_; ++s) {
            const std::size_t t = first_ + s;
            std::uint64_t xp = 0;
            for (std::uint32_t i = 0; i < lags_.driver; ++i) xp = xp * qx + xs[t - i];
            keys_a[s] = yp_[s] * card_xp_ + xp;
            keys_b[s] = yf_yp_[s] * card_xp_ + xp;
        }
        const double h_yp_xp = entropy_of(keys_a, card_yp_ * card_xp_, scratch);
        const double h_all = entropy_of(keys_b, card_all_, scratch);
        const double te = (h_yf_yp_ - h_yp_) - (h_all - h_yp_xp);
        if (te < -1e-12) throw std::logic_error("plug-in transfer entropy negative beyond rounding");
        return std::max(te, 0.0);
    }

    std::size_t series_length() const noexcept { return n_; }

private:
    /// Plug-in entropy (bits) of the empirical distribution of `keys`.
    double entropy_of(std::span<const std::uint64_t> keys, std::uint64_t card,
                      std::vector<std::uint32_t>& scratch) const {
        double sum = 0.0;
        if (card <= dense_limit) {
            if (scratch.size() < card) scratch.assign(card, 0);
            for (auto k : keys) ++scratch[k];
            // visiting each occupied cell once, resetting as we go
            for (auto k : keys) {
                if (scratch[k] != 0) {
                    sum += clogc_[scratch[k]];
                    scratch[k] = 0;
                }
            }
        } else {
            std::vector<std::uint64_t> sorted(keys.begin(), keys.end());
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < sorted.size();) {
                std::size_t j = i;
                while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
                sum += clogc_[j - i];
                i = j;
            }
        }
        const double n = static_cast<double>(keys.size());
        return std::log2(n) - sum / n;
    }

    TeLags lags_;
    std::size_t n_;
    std::size_t first_ = 0;
    std::size_t samples_ = 0;
    std::uint64_t card_yp_ = 0, card_xp_ = 0, card_yf_yp_ = 0, card_all_ = 0;
    std::vector<double> clogc_;
    std::vector<std::uint64_t> yp_, yf_yp_;
    double h_yp_ = 0.0, h_yf_yp_ = 0.0;
};

}  // namespace

double transfer_entropy(const SymbolicSeries& x, const SymbolicSeries& y, const TeLags& lags) {
    if (x.size() != y.size()) throw LengthError("transfer entropy needs equal-length series");
    const TeEstimator est(y, x.alphabet_size(), lags);
    std::vector<std::uint64_t> a, b;
    std::vector<std::uint32_t> scratch;
    return est.evaluate(x.symbols(), x.alphabet_size(), a, b, scratch);
}

TeResult shuffle_test(const SymbolicSeries& x_in, const SymbolicSeries& y_in, const ShuffleTestConfig& config,
                      Direction direction) {
    const SymbolicSeries& x = direction == Direction::XtoY ? x_in : y_in;
    const SymbolicSeries& y = direction == Direction::XtoY ? y_in : x_in;
    if (x.size() != y.size()) throw LengthError("transfer entropy needs equal-length series");
    if (config.n_shuffles < min_shuffles) {
        throw DomainError("shuffle test needs at least " + std::to_string(min_shuffles) + " shuffles");
    }

    const std::uint32_t qx = x.alphabet_size();
    const TeEstimator est(y, qx, config.lags);

    TeResult r;
    r.direction = direction;
    r.lags = config.lags;
    r.n_shuffles = config.n_shuffles;
    {
        std::vector<std::uint64_t> a, b;
        std::vector<std::uint32_t> scratch;
        r.te_observed = est.evaluate(x.symbols(), qx, a, b, scratch);
    }

    std::vector<double> null_values(config.n_shuffles);
    parallel_for(config.n_shuffles, config.threads, [&](std::size_t i) {
        Rng rng(derive_seed(config.seed, {i}));
        std::vector<Symbol> perm(x.symbols().begin(), x.symbols().end());
        rng.shuffle(std::span<Symbol>(perm));
        std::vector<std::uint64_t> a, b;
        std::vector<std::uint32_t> scratch;
        null_values[i] = est.evaluate(perm, qx, a, b, scratch);
    });

    std::size_t exceed = 0;
    double sum = 0.0;
    for (double v : null_values) {
        if (v >= r.te_observed) ++exceed;
        sum += v;
    }
    const double n = static_cast<double>(config.n_shuffles);
    r.p_value = static_cast<double>(exceed) / n;
    r.null_mean = sum / n;
    double ss = 0.0;
    for (double v : null_values) ss += (v - r.null_mean) * (v - r.null_mean);
    r.null_std = std::sqrt(ss / (n - 1.0));
    r.effective_te = r.te_observed - r.null_mean;
    return r;
}

}  // namespace teflow
