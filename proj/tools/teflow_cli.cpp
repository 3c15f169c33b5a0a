// teflow command-line front end.
//
// Single-pair subcommands read price files given with --driver/--target (or
// --prices); with --config they run over every firm of the universe instead.
// Tables go to standard output as CSV, warnings to standard error as
// `WARN <ticker> <reason>`.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "teflow/entropy.hpp"
#include "teflow/errors.hpp"
#include "teflow/io.hpp"
#include "teflow/linear.hpp"
#include "teflow/pipeline.hpp"
#include "teflow/report.hpp"
#include "teflow/rng.hpp"
#include "teflow/rolling.hpp"
#include "teflow/synthetic.hpp"
#include "teflow/timeseries.hpp"

namespace fs = std::filesystem;
using namespace teflow;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out_dir;
};

struct PairArgs {
    std::string driver;
    std::string target;
    std::string start;
    std::string end;
};

struct TeArgs {
    std::string binning = "tail:5,95";
    std::uint32_t j = 1, k = 1, h = 1;
    std::size_t n_shuffles = 1000;
};

Date date_arg(const std::string& s, Date fallback) {
    if (s.empty()) return fallback;
    const auto d = parse_date(s);
    if (!d) throw ConfigError("invalid date '" + s + "' (expected YYYY-MM-DD)");
    return *d;
}

ReturnSeries returns_from(const std::string& file, const PairArgs& a) {
    const auto prices = load_prices(file);
    return log_returns(prices.slice(date_arg(a.start, Date::min()), date_arg(a.end, Date::max())));
}

AlignedPair pair_from(const PairArgs& a) {
    if (a.driver.empty() || a.target.empty()) throw ConfigError("--driver and --target are required without --config");
    return align(returns_from(a.driver, a), returns_from(a.target, a));
}

BinningSpec binning_arg(const std::string& s) {
    try {
        return parse_binning(s);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

ReportBundle pipeline(const Globals& g, bool te, bool rolling) {
    auto config = load_config(g.config);
    if (g.seed) config.params.seed = *g.seed;
    PipelineOptions o;
    o.threads = g.threads;
    o.transfer_entropy = te;
    o.rolling = rolling;
    auto b = run_pipeline(config, o);
    for (const auto& w : b.warnings) std::cerr << "WARN " << w.ticker << ' ' << w.reason << '\n';
    return b;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

void print_stats_header() { std::cout << "ticker,n,mean,median,std,skewness,excess_kurtosis,min,max\n"; }
void print_stats(const std::string& ticker, const DescriptiveStats& s) {
    std::cout << ticker << ',' << s.n << ',' << format_real(s.mean) << ',' << format_real(s.median) << ','
              << format_real(s.std) << ',' << opt_real(s.skewness) << ',' << opt_real(s.excess_kurtosis) << ','
              << format_real(s.min) << ',' << format_real(s.max) << '\n';
}

void print_corr_header() {
    std::cout << "ticker,n,rho_same_day,p_same_day,star_same_day,rho_driver_leads,p_driver_leads,star_driver_leads,"
                 "rho_target_leads,p_target_leads,star_target_leads\n";
}
void print_corr(const std::string& ticker, std::size_t n, const LeadLagCorrelations& c) {
    std::cout << ticker << ',' << n;
    for (const auto* r : {&c.same_day, &c.driver_leads, &c.target_leads}) {
        std::cout << ',' << format_real(r->rho) << ',' << format_real(r->p_value) << ',' << to_string(r->star);
    }
    std::cout << '\n';
}

void print_sfm_header() { std::cout << "ticker,n,alpha,beta,r_squared\n"; }
void print_sfm(const std::string& ticker, const SfmFit& f) {
    std::cout << ticker << ',' << f.n << ',' << format_real(f.alpha) << ',' << format_real(f.beta) << ','
              << format_real(f.r_squared) << '\n';
}

void print_amihud_header() { std::cout << "ticker,delta,liquidity_score,n_days,n_skipped\n"; }

void print_te_header() {
    std::cout << "ticker,direction,te,p_value,null_mean,null_std,effective_te,n_shuffles,tier\n";
}
void print_te(const std::string& ticker, const TeResult& r) {
    std::cout << ticker << ',' << (r.direction == Direction::XtoY ? "driver_to_target" : "target_to_driver") << ','
              << format_real(r.te_observed) << ',' << format_real(r.p_value) << ',' << format_real(r.null_mean) << ','
              << format_real(r.null_std) << ',' << format_real(r.effective_te) << ',' << r.n_shuffles << ','
              << to_string(tier(r.p_value)) << '\n';
}

void add_pair_options(CLI::App* sub, PairArgs& a) {
    sub->add_option("--driver", a.driver, "Driver price CSV");
    sub->add_option("--target", a.target, "Target price CSV");
    sub->add_option("--start", a.start, "First date (YYYY-MM-DD)");
    sub->add_option("--end", a.end, "Last date (YYYY-MM-DD)");
}

void add_te_options(CLI::App* sub, TeArgs& t) {
    sub->add_option("--binning", t.binning, "quantile:<q> or tail:<lo>,<hi>")->capture_default_str();
    sub->add_option("-j,--driver-lag", t.j, "Driver history length")->capture_default_str();
    sub->add_option("-k,--target-lag", t.k, "Target history length")->capture_default_str();
    sub->add_option("--horizon", t.h, "Prediction horizon")->capture_default_str();
    sub->add_option("--shuffles", t.n_shuffles, "Number of shuffles")->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{"Directional information flow between a driver and target return series"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "Universe configuration (JSON)");
    app.add_option("--seed", g.seed, "Root seed (overrides the configuration)");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Output directory");

    PairArgs pa;
    TeArgs ta;
    std::string prices_file;
    std::size_t window = 252, stride = 1;
    bool global_edges = false;
    std::string process = "copy:1";
    std::size_t length = 1000;

    auto* stats = app.add_subcommand("stats", "Descriptive statistics of log returns");
    stats->add_option("--prices", prices_file, "Price CSV");
    stats->add_option("--start", pa.start, "First date");
    stats->add_option("--end", pa.end, "Last date");
    auto* corr = app.add_subcommand("corr", "Same-day and one-day lead-lag Pearson correlations");
    add_pair_options(corr, pa);
    auto* sfm = app.add_subcommand("sfm", "Single-factor regression of target on driver");
    add_pair_options(sfm, pa);
    auto* amh = app.add_subcommand("amihud", "Amihud illiquidity and liquidity score");
    amh->add_option("--prices", prices_file, "Price CSV with dollar volume");
    amh->add_option("--start", pa.start, "First date");
    amh->add_option("--end", pa.end, "Last date");
    auto* te = app.add_subcommand("te", "Transfer entropy in both directions with shuffle significance");
    add_pair_options(te, pa);
    add_te_options(te, ta);
    auto* rte = app.add_subcommand("rolling-te", "Rolling-window transfer entropy in both directions");
    add_pair_options(rte, pa);
    add_te_options(rte, ta);
    rte->add_option("--window", window, "Window length")->capture_default_str();
    rte->add_option("--stride", stride, "Window stride")->capture_default_str();
    rte->add_flag("--global-edges", global_edges, "Fit bin edges once on the whole pair");
    auto* cls = app.add_subcommand("classify", "Group every firm of the universe");
    auto* rep = app.add_subcommand("report", "Run the full pipeline and write every report file");
    auto* syn = app.add_subcommand("synth", "Write a synthetic driver/target pair as price files");
    syn->add_option("--process", process, "independent, copy:L, linear:a,s or threshold:L,f")->capture_default_str();
    syn->add_option("--length", length, "Number of returns")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::uint64_t seed = g.seed.value_or(0);
    const bool by_config = !g.config.empty();

    if (*stats) {
        print_stats_header();
        if (by_config) {
            const auto b = pipeline(g, false, false);
            if (b.driver_stats) print_stats(b.driver_ticker, *b.driver_stats);
            for (const auto& r : b.firms) print_stats(r.ticker, r.stats);
        } else {
            if (prices_file.empty()) throw ConfigError("--prices or --config is required");
            const auto r = returns_from(prices_file, pa);
            print_stats(r.ticker(), describe(r));
        }
    } else if (*corr) {
        print_corr_header();
        if (by_config) {
            for (const auto& r : pipeline(g, false, false).firms) print_corr(r.ticker, r.n_obs, r.corr);
        } else {
            const auto p = pair_from(pa);
            print_corr(p.target().ticker(), p.size(), lagged_pearson(p));
        }
    } else if (*sfm) {
        print_sfm_header();
        if (by_config) {
            for (const auto& r : pipeline(g, false, false).firms) print_sfm(r.ticker, r.sfm);
        } else {
            const auto p = pair_from(pa);
            print_sfm(p.target().ticker(), sfm_fit(p));
        }
    } else if (*amh) {
        print_amihud_header();
        if (by_config) {
            for (const auto& r : pipeline(g, false, false).firms) {
                if (!r.amihud) continue;
                std::cout << r.ticker << ',' << format_real(r.amihud->delta) << ','
                          << format_real(r.amihud->liquidity_score) << ',' << r.amihud->n_days << ','
                          << r.amihud->n_skipped << '\n';
            }
        } else {
            if (prices_file.empty()) throw ConfigError("--prices or --config is required");
            const auto prices = load_prices(prices_file);
            const auto a = amihud(prices, returns_from(prices_file, pa));
            std::cout << prices.ticker() << ',' << format_real(a.delta) << ',' << format_real(a.liquidity_score)
                      << ',' << a.n_days << ',' << a.n_skipped << '\n';
        }
    } else if (*te) {
        print_te_header();
        if (by_config) {
            for (const auto& r : pipeline(g, true, false).firms) {
                if (r.te_xy) print_te(r.ticker, *r.te_xy);
                if (r.te_yx) print_te(r.ticker, *r.te_yx);
            }
        } else {
            const auto p = pair_from(pa);
            const auto spec = binning_arg(ta.binning);
            const auto sx = discretize(p.driver(), spec);
            const auto sy = discretize(p.target(), spec);
            ShuffleTestConfig st;
            st.lags = {ta.j, ta.k, ta.h};
            st.n_shuffles = ta.n_shuffles;
            st.threads = g.threads;
            st.seed = derive_seed(seed, {0});
            print_te(p.target().ticker(), shuffle_test(sx, sy, st, Direction::XtoY));
            st.seed = derive_seed(seed, {1});
            print_te(p.target().ticker(), shuffle_test(sx, sy, st, Direction::YtoX));
        }
    } else if (*rte) {
        if (by_config) {
            const auto b = pipeline(g, false, true);
            const fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
            fs::create_directories(dir);
            for (const auto& e : b.rolling) {
                std::ofstream out(dir / ("rolling_" + e.ticker + ".csv"));
                write_rolling_csv(out, e.xy, e.yx);
                const auto sx = summarize(e.xy), sy = summarize(e.yx);
                std::cout << e.ticker << ": " << sx.n_windows << " windows, mean TE driver->target "
                          << format_real(sx.mean_te) << " (" << sx.n_significant_10pct << " significant at 10%), "
                          << "target->driver " << format_real(sy.mean_te) << " (" << sy.n_significant_10pct
                          << ")\n";
            }
        } else {
            const auto p = pair_from(pa);
            RollingConfig rc;
            rc.window = window;
            rc.stride = stride;
            rc.binning = binning_arg(ta.binning);
            rc.lags = {ta.j, ta.k, ta.h};
            rc.n_shuffles = ta.n_shuffles;
            rc.seed = seed;
            rc.threads = g.threads;
            rc.global_edges = global_edges;
            const auto [xy, yx] = rolling_te(p, rc);
            if (g.out_dir.empty()) {
                write_rolling_csv(std::cout, xy, yx);
            } else {
                fs::create_directories(g.out_dir);
                std::ofstream out(fs::path(g.out_dir) / ("rolling_" + p.target().ticker() + ".csv"));
                write_rolling_csv(out, xy, yx);
            }
        }
    } else if (*cls) {
        if (!by_config) throw ConfigError("classify needs --config");
        const auto b = pipeline(g, false, false);
        std::cout << "# gamma_threshold=" << format_real(b.gamma_threshold)
                  << " liquidity_threshold=" << format_real(b.liquidity_threshold) << '\n';
        std::cout << "ticker,beta,rho_same_day,liquidity_score,gamma,group\n";
        for (const auto& r : b.firms) {
            std::cout << r.ticker << ',' << format_real(r.sfm.beta) << ',' << format_real(r.corr.same_day.rho) << ','
                      << (r.amihud ? format_real(r.amihud->liquidity_score) : "") << ',' << format_real(r.gamma)
                      << ',' << (r.group ? std::string(to_string(*r.group)) : "") << '\n';
        }
    } else if (*rep) {
        if (!by_config) throw ConfigError("report needs --config");
        const auto b = pipeline(g, true, true);
        const fs::path dir = g.out_dir.empty() ? fs::path("teflow_report") : fs::path(g.out_dir);
        write_report(b, dir);
        std::cout << "wrote " << b.firms.size() << " firms, " << b.rolling.size() << " rolling tracks, "
                  << b.warnings.size() << " warnings to " << dir.string() << '\n';
    } else if (*syn) {
        synth::ProcessSpec spec;
        try {
            spec.kind = synth::parse_process(process);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        spec.length = length;
        spec.seed = seed;
        const auto pair = synth::generate(spec);
        const fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
        fs::create_directories(dir);
        for (const ReturnSeries* r : {&pair.driver(), &pair.target()}) {
            std::vector<PriceObservation> obs{{r->dates()[0] - std::chrono::days{1}, 100.0, 1e6}};
            for (std::size_t t = 0; t < r->size(); ++t) {
                obs.push_back({r->dates()[t], obs.back().close * std::exp(r->values()[t]), 1e6});
            }
            write_prices(dir / (r->ticker() + ".csv"), PriceSeries(r->ticker(), std::move(obs)));
        }
        std::ofstream out(dir / "pair.csv");
        out << "date,x,y\n";
        for (std::size_t t = 0; t < pair.size(); ++t) {
            out << format_date(pair.dates()[t]) << ',' << format_real(pair.driver().values()[t]) << ','
                << format_real(pair.target().values()[t]) << '\n';
        }
        std::cout << "wrote " << synth::to_string(spec.kind) << " pair of length " << length << " to "
                  << dir.string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
