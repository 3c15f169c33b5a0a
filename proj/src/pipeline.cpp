#include "teflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "teflow/errors.hpp"
#include "teflow/io.hpp"
#include "teflow/parallel.hpp"
#include "teflow/rng.hpp"

namespace teflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

fs::path resolve(const fs::path& base_dir, const fs::path& p) {
    return p.is_absolute() ? p : base_dir / p;
}

Date require_date(const std::string& text, const std::string& what) {
    const auto d = parse_date(text);
    if (!d) throw ConfigError("invalid " + what + " '" + text + "' (expected YYYY-MM-DD)");
    return *d;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

std::vector<FirmEntry> load_universe(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open universe file " + path.string());
    const fs::path base = path.parent_path();

    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    std::vector<FirmEntry> firms;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (header.empty()) {
            header = fields;
            const std::vector<std::string> required{"ticker", "price_file", "btc_holdings", "market_cap",
                                                    "latest_acquisition_date"};
            if (header.size() < required.size() || !std::equal(required.begin(), required.end(), header.begin()) ||
                (header.size() == 6 && header[5] != "rolling") || header.size() > 6) {
                throw ParseError(path.string() + ": expected header "
                                 "'ticker,price_file,btc_holdings,market_cap,latest_acquisition_date[,rolling]'",
                                 lineno);
            }
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(path.string() + ": expected " + std::to_string(header.size()) + " fields", lineno);
        }
        FirmEntry f;
        f.ticker = fields[0];
        if (f.ticker.empty()) throw ParseError(path.string() + ": empty ticker", lineno);
        if (!seen.insert(f.ticker).second) {
            throw IntegrityError(path.string() + ": duplicate ticker " + f.ticker);
        }
        f.price_file = resolve(base, fields[1]);
        f.btc_holdings = parse_double(fields[2], lineno, "btc_holdings");
        f.market_cap = parse_double(fields[3], lineno, "market_cap");
        if (f.btc_holdings < 0.0 || !(f.market_cap > 0.0)) {
            throw ParseError(path.string() + ": holdings must be >= 0 and market cap > 0", lineno);
        }
        if (!fields[4].empty()) {
            f.latest_acquisition_date = parse_date(fields[4]);
            if (!f.latest_acquisition_date) {
                throw ParseError(path.string() + ": invalid date '" + fields[4] + "'", lineno);
            }
        }
        if (header.size() == 6) {
            if (fields[5] != "0" && fields[5] != "1" && !fields[5].empty()) {
                throw ParseError(path.string() + ": rolling flag must be 0 or 1", lineno);
            }
            f.rolling = fields[5] == "1";
        }
        if (!fs::exists(f.price_file)) {
            throw ConfigError("price file for " + f.ticker + " not found: " + f.price_file.string());
        }
        firms.push_back(std::move(f));
    }
    if (header.empty()) throw ParseError(path.string() + ": empty universe file");
    return firms;
}

UniverseConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known{
        "driver_ticker", "driver_price_file", "start", "end", "universe_file", "rolling_start", "rolling_end",
        "binning", "lags", "window", "stride", "n_shuffles", "seed", "gamma_threshold", "liquidity_threshold",
        "global_edges"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    for (const char* key : {"driver_price_file", "start", "end", "universe_file"}) {
        if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
    }

    const fs::path base = path.parent_path();
    UniverseConfig c;
    c.driver_ticker = get_or<std::string>(j, "driver_ticker", "BTC-USD");
    c.driver_price_file = resolve(base, get_or<std::string>(j, "driver_price_file", ""));
    c.start = require_date(get_or<std::string>(j, "start", ""), "start");
    c.end = require_date(get_or<std::string>(j, "end", ""), "end");
    if (c.end < c.start) throw ConfigError("date range is empty (end before start)");
    if (auto s = get_or<std::string>(j, "rolling_start", ""); !s.empty()) c.rolling_start = require_date(s, "rolling_start");
    if (auto s = get_or<std::string>(j, "rolling_end", ""); !s.empty()) c.rolling_end = require_date(s, "rolling_end");

    auto& p = c.params;
    try {
        p.binning = parse_binning(get_or<std::string>(j, "binning", "tail:5,95"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("lags")) {
        const auto& l = j.at("lags");
        p.lags.driver = get_or<std::uint32_t>(l, "driver", 1);
        p.lags.target = get_or<std::uint32_t>(l, "target", 1);
        p.lags.horizon = get_or<std::uint32_t>(l, "horizon", 1);
    }
    p.window = get_or<std::size_t>(j, "window", 252);
    p.stride = get_or<std::size_t>(j, "stride", 1);
    p.n_shuffles = get_or<std::size_t>(j, "n_shuffles", 1000);
    p.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("gamma_threshold") && !j.at("gamma_threshold").is_null()) {
        p.gamma_threshold = get_or<double>(j, "gamma_threshold", 0.0);
    }
    if (j.contains("liquidity_threshold") && !j.at("liquidity_threshold").is_null()) {
        p.liquidity_threshold = get_or<double>(j, "liquidity_threshold", 0.0);
    }
    p.global_edges = get_or<bool>(j, "global_edges", false);

    if (p.lags.driver == 0 || p.lags.target == 0 || p.lags.horizon == 0) throw ConfigError("lags must be >= 1");
    if (p.window < min_rolling_window) throw ConfigError("window must be >= " + std::to_string(min_rolling_window));
    if (p.stride == 0) throw ConfigError("stride must be >= 1");
    if (p.n_shuffles < min_shuffles) throw ConfigError("n_shuffles must be >= " + std::to_string(min_shuffles));

    if (!fs::exists(c.driver_price_file)) {
        throw ConfigError("driver price file not found: " + c.driver_price_file.string());
    }
    c.firms = load_universe(resolve(base, get_or<std::string>(j, "universe_file", "")));
    return c;
}

// ---------------------------------------------------------------------------

MeasureSummary summarize_measure(std::string name, std::span<const double> values) {
    std::vector<double> v;
    std::copy_if(values.begin(), values.end(), std::back_inserter(v), [](double x) { return !std::isnan(x); });
    MeasureSummary s{std::move(name), v.size(), nan_v, nan_v, nan_v, nan_v, nan_v};
    if (v.empty()) return s;
    if (v.size() >= 4) {
        const auto d = describe(v);
        s.mean = d.mean;
        s.median = d.median;
        s.std = d.std;
        s.skewness = d.skewness.value_or(nan_v);
        s.kurtosis = d.excess_kurtosis.value_or(nan_v);
        return s;
    }
    const double n = static_cast<double>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    s.median = median(v);
    if (v.size() >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

namespace {

struct FirmWork {
    std::optional<FirmRow> row;
    std::optional<PriceSeries> prices;
    std::vector<Warning> warnings;
};

double gamma_for(const FirmEntry& f, const PriceSeries& driver_prices) {
    if (!f.latest_acquisition_date) return nan_v;
    const auto obs = driver_prices.observations();
    const auto it = std::upper_bound(obs.begin(), obs.end(), *f.latest_acquisition_date,
                                     [](Date d, const PriceObservation& o) { return d < o.date; });
    if (it == obs.begin()) return nan_v;
    return f.btc_holdings * std::prev(it)->close / f.market_cap;
}

FirmWork process_firm(const FirmEntry& f, const UniverseConfig& config, const PriceSeries& driver_prices,
                      const ReturnSeries& driver_returns, const PipelineOptions& options) {
    FirmWork w;
    FirmRow row;
    row.ticker = f.ticker;
    row.btc_holdings = f.btc_holdings;
    row.market_cap = f.market_cap;
    try {
        w.prices = load_prices(f.price_file, f.ticker);
        const ReturnSeries returns = log_returns(w.prices->slice(config.start, config.end));
        const AlignedPair pair = align(driver_returns, returns);
        row.n_obs = pair.size();
        row.stats = describe(returns);
        row.corr = lagged_pearson(pair);
        row.sfm = sfm_fit(pair);
        if (w.prices->has_volume()) {
            try {
                const auto a = amihud(*w.prices, returns);
                row.amihud = AmihudRow{a.delta, a.liquidity_score, a.n_days, a.n_skipped};
            } catch (const DegenerateInputError& e) {
                w.warnings.push_back({f.ticker, std::string("amihud skipped: ") + e.what()});
            }
        } else {
            w.warnings.push_back({f.ticker, "amihud skipped: no dollar volume"});
        }
        row.gamma = gamma_for(f, driver_prices);
        if (std::isnan(row.gamma) && f.latest_acquisition_date) {
            w.warnings.push_back({f.ticker, "gamma not computed: no driver price on or before " +
                                                format_date(*f.latest_acquisition_date)});
        }
        if (options.transfer_entropy) {
            try {
                const auto sx = discretize(pair.driver(), config.params.binning);
                const auto sy = discretize(pair.target(), config.params.binning);
                ShuffleTestConfig st;
                st.lags = config.params.lags;
                st.n_shuffles = config.params.n_shuffles;
                const std::uint64_t firm_key = fnv1a(f.ticker);
                st.seed = derive_seed(config.params.seed, {firm_key, 0});
                row.te_xy = shuffle_test(sx, sy, st, Direction::XtoY);
                st.seed = derive_seed(config.params.seed, {firm_key, 1});
                row.te_yx = shuffle_test(sx, sy, st, Direction::YtoX);
            } catch (const Error& e) {
                w.warnings.push_back({f.ticker, std::string("transfer entropy skipped: ") + e.what()});
            }
        }
        w.row = std::move(row);
    } catch (const Error& e) {
        w.warnings.push_back({f.ticker, e.what()});
        w.prices.reset();
    }
    return w;
}

}  // namespace

ReportBundle run_pipeline(const UniverseConfig& config, const PipelineOptions& options) {
    const PriceSeries driver_prices = load_prices(config.driver_price_file, config.driver_ticker);
    ReturnSeries driver_returns = [&] {
        try {
            return log_returns(driver_prices.slice(config.start, config.end));
        } catch (const LengthError& e) {
            throw ConfigError("driver has too few prices in the date range: " + std::string(e.what()));
        }
    }();

    ReportBundle b;
    b.driver_ticker = config.driver_ticker;
    b.start = format_date(config.start);
    b.end = format_date(config.end);
    b.binning = to_string(config.params.binning);
    b.lags = config.params.lags;
    b.n_shuffles = config.params.n_shuffles;
    b.seed = config.params.seed;
    if (driver_returns.size() >= 4) b.driver_stats = describe(driver_returns);

    std::vector<double> holdings;
    for (const auto& f : config.firms) holdings.push_back(f.btc_holdings);
    if (!holdings.empty()) b.holdings = holdings_summary(holdings);

    std::vector<FirmWork> work(config.firms.size());
    parallel_for(config.firms.size(), options.threads, [&](std::size_t i) {
        work[i] = process_firm(config.firms[i], config, driver_prices, driver_returns, options);
    });

    for (auto& w : work) {
        for (auto& warn : w.warnings) b.warnings.push_back(std::move(warn));
        if (w.row) b.firms.push_back(std::move(*w.row));
    }
    if (b.firms.empty()) throw ConfigError("no firm could be loaded and aligned with the driver");

    std::vector<double> gammas, liquidity;
    for (const auto& r : b.firms) {
        gammas.push_back(r.gamma);
        liquidity.push_back(r.amihud ? r.amihud->liquidity_score : nan_v);
    }
    auto median_or_nan = [](const std::vector<double>& v) {
        std::vector<double> finite;
        std::copy_if(v.begin(), v.end(), std::back_inserter(finite), [](double x) { return !std::isnan(x); });
        return finite.empty() ? nan_v : median(finite);
    };
    b.gamma_threshold = config.params.gamma_threshold.value_or(median_or_nan(gammas));
    b.liquidity_threshold = config.params.liquidity_threshold.value_or(median_or_nan(liquidity));

    for (auto& r : b.firms) {
        if (!r.amihud) continue;
        FirmProfile profile;
        profile.ticker = r.ticker;
        profile.btc_holdings = r.btc_holdings;
        profile.market_cap = r.market_cap;
        profile.gamma = r.gamma;
        profile.beta = r.sfm.beta;
        profile.rho_same_day = r.corr.same_day.rho;
        profile.amihud_delta = r.amihud->delta;
        profile.liquidity_score = r.amihud->liquidity_score;
        r.group = classify(profile, b.gamma_threshold, b.liquidity_threshold);
    }

    auto column = [&](auto&& get) {
        std::vector<double> v;
        for (const auto& r : b.firms) v.push_back(get(r));
        return v;
    };
    auto te_of = [](const std::optional<TeResult>& t) { return t ? t->te_observed : nan_v; };
    b.summary = {
        summarize_measure("rho_same_day", column([](const FirmRow& r) { return r.corr.same_day.rho; })),
        summarize_measure("rho_driver_leads", column([](const FirmRow& r) { return r.corr.driver_leads.rho; })),
        summarize_measure("rho_target_leads", column([](const FirmRow& r) { return r.corr.target_leads.rho; })),
        summarize_measure("te_driver_to_firm", column([&](const FirmRow& r) { return te_of(r.te_xy); })),
        summarize_measure("te_firm_to_driver", column([&](const FirmRow& r) { return te_of(r.te_yx); })),
        summarize_measure("beta", column([](const FirmRow& r) { return r.sfm.beta; })),
        summarize_measure("alpha", column([](const FirmRow& r) { return r.sfm.alpha; })),
        summarize_measure("r_squared", column([](const FirmRow& r) { return r.sfm.r_squared; })),
        summarize_measure("liquidity_score",
                          column([](const FirmRow& r) { return r.amihud ? r.amihud->liquidity_score : nan_v; })),
        summarize_measure("gamma", column([](const FirmRow& r) { return r.gamma; })),
    };

    if (options.rolling) {
        const Date rs = config.rolling_start.value_or(Date::min());
        const Date re = config.rolling_end.value_or(Date::max());
        std::optional<ReturnSeries> driver_full;
        for (std::size_t i = 0; i < config.firms.size(); ++i) {
            const auto& f = config.firms[i];
            if (!f.rolling || !work[i].prices) continue;
            try {
                if (!driver_full) driver_full = log_returns(driver_prices.slice(rs, re));
                const AlignedPair pair = align(*driver_full, log_returns(work[i].prices->slice(rs, re)));
                RollingConfig rc;
                rc.window = config.params.window;
                rc.stride = config.params.stride;
                rc.binning = config.params.binning;
                rc.lags = config.params.lags;
                rc.n_shuffles = config.params.n_shuffles;
                rc.seed = derive_seed(config.params.seed, {fnv1a(f.ticker), 2});
                rc.threads = options.threads;
                rc.global_edges = config.params.global_edges;
                auto [xy, yx] = rolling_te(pair, rc);
                b.rolling.push_back({f.ticker, std::move(xy), std::move(yx)});
            } catch (const Error& e) {
                b.warnings.push_back({f.ticker, std::string("rolling run skipped: ") + e.what()});
            }
        }
    }
    return b;
}

}  // namespace teflow
