#include "teflow/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "teflow/errors.hpp"
#include "teflow/rng.hpp"

namespace teflow::synth {

namespace {

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError("invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

std::pair<std::string_view, std::string_view> split2(std::string_view s) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw DomainError("expected two comma-separated values in '" + std::string(s) + "'");
    return {s.substr(0, comma), s.substr(comma + 1)};
}

void validate(const ProcessSpec& spec) {
    if (spec.length < min_process_length) {
        throw DomainError("process length must be at least " + std::to_string(min_process_length));
    }
    if (const auto* c = std::get_if<Copy>(&spec.kind); c && c->lag == 0) {
        throw DomainError("copy lag must be at least 1");
    }
    if (const auto* l = std::get_if<LinearCoupled>(&spec.kind)) {
        if (!(l->sigma_eps > 0.0) || !std::isfinite(l->sigma_eps) || !std::isfinite(l->a)) {
            throw DomainError("linear coupling needs finite a and sigma_eps > 0");
        }
    }
    if (const auto* t = std::get_if<ThresholdCoupled>(&spec.kind)) {
        if (t->lag == 0) throw DomainError("threshold lag must be at least 1");
        if (!(t->flip_prob >= 0.0 && t->flip_prob <= 0.5)) throw DomainError("flip_prob must lie in [0, 0.5]");
    }
}

std::vector<double> normals(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& e : v) e = rng.normal();
    return v;
}

}  // namespace

ProcessKind parse_process(std::string_view text) {
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    const auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (kind == "independent") return Independent{};
    if (kind == "copy") return Copy{parse_field<std::uint32_t>(args, "copy lag")};
    if (kind == "linear") {
        auto [a, s] = split2(args);
        return LinearCoupled{parse_field<double>(a, "coupling"), parse_field<double>(s, "noise std")};
    }
    if (kind == "threshold") {
        auto [l, f] = split2(args);
        return ThresholdCoupled{parse_field<std::uint32_t>(l, "lag"), parse_field<double>(f, "flip probability")};
    }
    throw DomainError("unknown process '" + std::string(text) + "'");
}

std::string to_string(const ProcessKind& kind) {
    struct Visitor {
        std::string operator()(const Independent&) const { return "independent"; }
        std::string operator()(const Copy& c) const { return "copy:" + std::to_string(c.lag); }
        std::string operator()(const LinearCoupled& l) const {
            char buf[64];
            std::snprintf(buf, sizeof buf, "linear:%g,%g", l.a, l.sigma_eps);
            return buf;
        }
        std::string operator()(const ThresholdCoupled& t) const {
            char buf[64];
            std::snprintf(buf, sizeof buf, "threshold:%u,%g", t.lag, t.flip_prob);
            return buf;
        }
    };
    return std::visit(Visitor{}, kind);
}

AlignedPair generate(const ProcessSpec& spec) {
    validate(spec);
    const std::size_t n = spec.length;
    Rng driver_rng(derive_seed(spec.seed, {0}));
    Rng noise_rng(derive_seed(spec.seed, {1}));

    std::vector<double> x, y(n);
    if (std::holds_alternative<Independent>(spec.kind)) {
        x = normals(driver_rng, n);
        y = normals(noise_rng, n);
    } else if (const auto* c = std::get_if<Copy>(&spec.kind)) {
        // lag pre-sample values feed the first Y observations
        const auto ext = normals(driver_rng, n + c->lag);
        x.assign(ext.begin() + c->lag, ext.end());
        for (std::size_t t = 0; t < n; ++t) y[t] = ext[t];
    } else if (const auto* l = std::get_if<LinearCoupled>(&spec.kind)) {
        const auto ext = normals(driver_rng, n + 1);
        x.assign(ext.begin() + 1, ext.end());
        for (std::size_t t = 0; t < n; ++t) y[t] = l->a * ext[t] + l->sigma_eps * noise_rng.normal();
    } else {
        const auto& th = std::get<ThresholdCoupled>(spec.kind);
        const auto ext = normals(driver_rng, n + th.lag);
        x.assign(ext.begin() + th.lag, ext.end());
        for (std::size_t t = 0; t < n; ++t) {
            double s = ext[t] < 0.0 ? -1.0 : 1.0;
            if (noise_rng.uniform() < th.flip_prob) s = -s;
            y[t] = s;
        }
    }

    std::vector<Date> dates(n);
    const Date start = *parse_date("2000-01-01");
    for (std::size_t t = 0; t < n; ++t) dates[t] = start + std::chrono::days{static_cast<int>(t)};
    return AlignedPair(ReturnSeries("X", dates, std::move(x)), ReturnSeries("Y", dates, std::move(y)));
}

double brute_force_te(const SymbolicSeries& x, const SymbolicSeries& y, const TeLags& lags) {
    const std::size_t n = x.size();
    if (y.size() != n) throw LengthError("brute_force_te needs equal-length series");
    if (n > max_oracle_length) throw LengthError("brute_force_te is limited to 10,000 observations");
    if (lags.driver == 0 || lags.target == 0 || lags.horizon == 0) throw DomainError("lags must be at least 1");
    const std::size_t m = std::max(lags.driver, lags.target);
    if (n < m + lags.horizon || n - m - lags.horizon < min_effective_samples) {
        throw LengthError("brute_force_te: too few effective samples");
    }

    using Past = std::vector<Symbol>;
    using Tuple = std::tuple<Symbol, Past, Past>;  // (y_future, y_past, x_past)
    std::map<Tuple, double> joint;
    double total = 0.0;
    for (std::size_t t = m - 1; t + lags.horizon < n; ++t) {
        Past yp, xp;
        for (std::uint32_t i = 0; i < lags.target; ++i) yp.push_back(y.symbols()[t - i]);
        for (std::uint32_t i = 0; i < lags.driver; ++i) xp.push_back(x.symbols()[t - i]);
        joint[Tuple{y.symbols()[t + lags.horizon], yp, xp}] += 1.0;
        total += 1.0;
    }

    // marginals by summing the joint table
    std::map<std::pair<Past, Past>, double> p_yp_xp;
    std::map<std::pair<Symbol, Past>, double> p_yf_yp;
    std::map<Past, double> p_yp;
    for (const auto& [key, count] : joint) {
        const auto& [yf, yp, xp] = key;
        const double p = count / total;
        p_yp_xp[{yp, xp}] += p;
        p_yf_yp[{yf, yp}] += p;
        p_yp[yp] += p;
    }

    double te = 0.0;
    for (const auto& [key, count] : joint) {
        const auto& [yf, yp, xp] = key;
        const double p_joint = count / total;
        const double cond_full = p_joint / p_yp_xp.at({yp, xp});
        const double cond_self = p_yf_yp.at({yf, yp}) / p_yp.at(yp);
        te += p_joint * std::log2(cond_full / cond_self);
    }
    return te;
}

}  // namespace teflow::synth
