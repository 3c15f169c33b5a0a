#include "teflow/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "teflow/errors.hpp"
#include "teflow/io.hpp"

namespace teflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }
double real(const json& j) { return j.is_null() ? nan_v : j.get<double>(); }
std::optional<double> opt_real(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::string opt_str(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

template <typename E, std::size_t N>
E enum_from(const std::string& s, const std::pair<E, const char*> (&table)[N]) {
    for (const auto& [e, name] : table) {
        if (s == name) return e;
    }
    throw ParseError("unknown enum value '" + s + "' in report");
}

constexpr std::pair<Star, const char*> star_names[] = {{Star::None, ""}, {Star::Single, "*"}, {Star::Double, "**"}};
constexpr std::pair<Group, const char*> group_names[] = {{Group::HighBeta, "HighBeta"},
                                                         {Group::LowBetaLiquid, "LowBetaLiquid"},
                                                         {Group::LowBetaIlliquid, "LowBetaIlliquid"}};
constexpr std::pair<Direction, const char*> direction_names[] = {{Direction::XtoY, "XtoY"},
                                                                 {Direction::YtoX, "YtoX"}};
constexpr std::pair<SignificanceTier, const char*> tier_names[] = {{SignificanceTier::T1, "T1"},
                                                                   {SignificanceTier::T2, "T2"},
                                                                   {SignificanceTier::T3, "T3"},
                                                                   {SignificanceTier::NS, "NS"}};

json lags_json(const TeLags& l) { return {{"driver", l.driver}, {"target", l.target}, {"horizon", l.horizon}}; }
TeLags lags_from(const json& j) {
    return {j.at("driver").get<std::uint32_t>(), j.at("target").get<std::uint32_t>(),
            j.at("horizon").get<std::uint32_t>()};
}

json stats_json(const DescriptiveStats& s) {
    return {{"n", s.n},           {"mean", num(s.mean)},       {"median", num(s.median)},
            {"std", num(s.std)},  {"skewness", num(s.skewness)}, {"excess_kurtosis", num(s.excess_kurtosis)},
            {"min", num(s.min)},  {"max", num(s.max)}};
}
DescriptiveStats stats_from(const json& j) {
    DescriptiveStats s{};
    s.n = j.at("n").get<std::size_t>();
    s.mean = real(j.at("mean"));
    s.median = real(j.at("median"));
    s.std = real(j.at("std"));
    s.skewness = opt_real(j.at("skewness"));
    s.excess_kurtosis = opt_real(j.at("excess_kurtosis"));
    s.min = real(j.at("min"));
    s.max = real(j.at("max"));
    return s;
}

json corr_json(const CorrResult& c) {
    return {{"rho", num(c.rho)}, {"p_value", num(c.p_value)}, {"star", to_string(c.star)}, {"n", c.n}};
}
CorrResult corr_from(const json& j) {
    return {real(j.at("rho")), real(j.at("p_value")), enum_from(j.at("star").get<std::string>(), star_names),
            j.at("n").get<std::size_t>()};
}

json te_json(const std::optional<TeResult>& t) {
    if (!t) return nullptr;
    return {{"te_observed", num(t->te_observed)}, {"p_value", num(t->p_value)},
            {"null_mean", num(t->null_mean)},     {"null_std", num(t->null_std)},
            {"effective_te", num(t->effective_te)}, {"n_shuffles", t->n_shuffles},
            {"direction", to_string(t->direction)}, {"lags", lags_json(t->lags)}};
}
std::optional<TeResult> te_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    TeResult t;
    t.te_observed = real(j.at("te_observed"));
    t.p_value = real(j.at("p_value"));
    t.null_mean = real(j.at("null_mean"));
    t.null_std = real(j.at("null_std"));
    t.effective_te = real(j.at("effective_te"));
    t.n_shuffles = j.at("n_shuffles").get<std::size_t>();
    t.direction = enum_from(j.at("direction").get<std::string>(), direction_names);
    t.lags = lags_from(j.at("lags"));
    return t;
}

json track_json(const RollingTeTrack& t) {
    json windows = json::array();
    for (const auto& w : t.windows) {
        windows.push_back({{"end_date", format_date(w.end_date)}, {"te", num(w.te)}, {"p_value", num(w.p_value)},
                           {"tier", to_string(w.tier)}});
    }
    return {{"direction", to_string(t.direction)}, {"window_length", t.window_length}, {"stride", t.stride},
            {"n_shuffles", t.n_shuffles},          {"seed", t.seed},                   {"windows", windows}};
}
RollingTeTrack track_from(const json& j) {
    RollingTeTrack t;
    t.direction = enum_from(j.at("direction").get<std::string>(), direction_names);
    t.window_length = j.at("window_length").get<std::size_t>();
    t.stride = j.at("stride").get<std::size_t>();
    t.n_shuffles = j.at("n_shuffles").get<std::size_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& w : j.at("windows")) {
        const auto d = parse_date(w.at("end_date").get<std::string>());
        if (!d) throw ParseError("invalid end_date in report");
        t.windows.push_back({*d, real(w.at("te")), real(w.at("p_value")),
                             enum_from(w.at("tier").get<std::string>(), tier_names)});
    }
    return t;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

std::string group_str(const std::optional<Group>& g) { return g ? std::string(to_string(*g)) : ""; }

}  // namespace

std::string report_to_json(const ReportBundle& b) {
    json firms = json::array();
    for (const auto& r : b.firms) {
        json amihud = nullptr;
        if (r.amihud) {
            amihud = {{"delta", num(r.amihud->delta)},
                      {"liquidity_score", num(r.amihud->liquidity_score)},
                      {"n_days", r.amihud->n_days},
                      {"n_skipped", r.amihud->n_skipped}};
        }
        firms.push_back({
            {"ticker", r.ticker},
            {"btc_holdings", num(r.btc_holdings)},
            {"market_cap", num(r.market_cap)},
            {"n_obs", r.n_obs},
            {"stats", stats_json(r.stats)},
            {"corr",
             {{"same_day", corr_json(r.corr.same_day)},
              {"driver_leads", corr_json(r.corr.driver_leads)},
              {"target_leads", corr_json(r.corr.target_leads)}}},
            {"sfm",
             {{"alpha", num(r.sfm.alpha)},
              {"beta", num(r.sfm.beta)},
              {"r_squared", num(r.sfm.r_squared)},
              {"n", r.sfm.n}}},
            {"amihud", amihud},
            {"gamma", num(r.gamma)},
            {"group", r.group ? json(to_string(*r.group)) : json(nullptr)},
            {"te_xy", te_json(r.te_xy)},
            {"te_yx", te_json(r.te_yx)},
        });
    }
    json summary = json::array();
    for (const auto& s : b.summary) {
        summary.push_back({{"measure", s.measure}, {"n", s.n}, {"mean", num(s.mean)}, {"median", num(s.median)},
                           {"std", num(s.std)}, {"skewness", num(s.skewness)}, {"kurtosis", num(s.kurtosis)}});
    }
    json rolling = json::array();
    for (const auto& e : b.rolling) {
        rolling.push_back({{"ticker", e.ticker}, {"xy", track_json(e.xy)}, {"yx", track_json(e.yx)}});
    }
    json warnings = json::array();
    for (const auto& w : b.warnings) warnings.push_back({{"ticker", w.ticker}, {"reason", w.reason}});

    json holdings = nullptr;
    if (b.holdings) {
        holdings = {{"q1", num(b.holdings->q1)},
                    {"median", num(b.holdings->median)},
                    {"q3", num(b.holdings->q3)},
                    {"min", num(b.holdings->min)},
                    {"max", num(b.holdings->max)}};
    }

    json doc = {
        {"driver_ticker", b.driver_ticker},
        {"start", b.start},
        {"end", b.end},
        {"binning", b.binning},
        {"lags", lags_json(b.lags)},
        {"n_shuffles", b.n_shuffles},
        {"seed", b.seed},
        {"gamma_threshold", num(b.gamma_threshold)},
        {"liquidity_threshold", num(b.liquidity_threshold)},
        {"driver_stats", b.driver_stats ? stats_json(*b.driver_stats) : json(nullptr)},
        {"holdings", holdings},
        {"firms", firms},
        {"summary", summary},
        {"rolling", rolling},
        {"warnings", warnings},
    };
    return doc.dump(2) + "\n";
}

ReportBundle report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    try {
        ReportBundle b;
        b.driver_ticker = j.at("driver_ticker").get<std::string>();
        b.start = j.at("start").get<std::string>();
        b.end = j.at("end").get<std::string>();
        b.binning = j.at("binning").get<std::string>();
        b.lags = lags_from(j.at("lags"));
        b.n_shuffles = j.at("n_shuffles").get<std::size_t>();
        b.seed = j.at("seed").get<std::uint64_t>();
        b.gamma_threshold = real(j.at("gamma_threshold"));
        b.liquidity_threshold = real(j.at("liquidity_threshold"));
        if (!j.at("driver_stats").is_null()) b.driver_stats = stats_from(j.at("driver_stats"));
        if (const auto& h = j.at("holdings"); !h.is_null()) {
            b.holdings = HoldingsSummary{real(h.at("q1")), real(h.at("median")), real(h.at("q3")), real(h.at("min")),
                                         real(h.at("max"))};
        }
        for (const auto& f : j.at("firms")) {
            FirmRow r;
            r.ticker = f.at("ticker").get<std::string>();
            r.btc_holdings = real(f.at("btc_holdings"));
            r.market_cap = real(f.at("market_cap"));
            r.n_obs = f.at("n_obs").get<std::size_t>();
            r.stats = stats_from(f.at("stats"));
            const auto& c = f.at("corr");
            r.corr = {corr_from(c.at("same_day")), corr_from(c.at("driver_leads")), corr_from(c.at("target_leads"))};
            const auto& s = f.at("sfm");
            r.sfm = {real(s.at("alpha")), real(s.at("beta")), real(s.at("r_squared")), s.at("n").get<std::size_t>()};
            if (const auto& a = f.at("amihud"); !a.is_null()) {
                r.amihud = AmihudRow{real(a.at("delta")), real(a.at("liquidity_score")),
                                     a.at("n_days").get<std::size_t>(), a.at("n_skipped").get<std::size_t>()};
            }
            r.gamma = real(f.at("gamma"));
            if (const auto& g = f.at("group"); !g.is_null()) r.group = enum_from(g.get<std::string>(), group_names);
            r.te_xy = te_from(f.at("te_xy"));
            r.te_yx = te_from(f.at("te_yx"));
            b.firms.push_back(std::move(r));
        }
        for (const auto& s : j.at("summary")) {
            b.summary.push_back({s.at("measure").get<std::string>(), s.at("n").get<std::size_t>(), real(s.at("mean")),
                                 real(s.at("median")), real(s.at("std")), real(s.at("skewness")),
                                 real(s.at("kurtosis"))});
        }
        for (const auto& e : j.at("rolling")) {
            b.rolling.push_back({e.at("ticker").get<std::string>(), track_from(e.at("xy")), track_from(e.at("yx"))});
        }
        for (const auto& w : j.at("warnings")) {
            b.warnings.push_back({w.at("ticker").get<std::string>(), w.at("reason").get<std::string>()});
        }
        return b;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

ReportBundle read_report(const fs::path& json_path) {
    std::ifstream in(json_path, std::ios::binary);
    if (!in) throw ParseError("cannot open report " + json_path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return report_from_json(text);
}

void write_rolling_csv(std::ostream& out, const RollingTeTrack& xy, const RollingTeTrack& yx) {
    out << "end_date,te_xy,p_xy,tier_xy,te_yx,p_yx,tier_yx\n";
    for (std::size_t i = 0; i < xy.windows.size(); ++i) {
        const auto& a = xy.windows[i];
        const auto& b = yx.windows.at(i);
        out << format_date(a.end_date) << ',' << format_real(a.te) << ',' << format_real(a.p_value) << ','
            << to_string(a.tier) << ',' << format_real(b.te) << ',' << format_real(b.p_value) << ','
            << to_string(b.tier) << '\n';
    }
}

void write_report(const ReportBundle& b, const fs::path& out_dir) {
    fs::create_directories(out_dir);

    {
        auto out = open_out(out_dir / "firms.csv");
        out << "ticker,n_obs,mean,median,std,skewness,excess_kurtosis,min,max,"
               "rho_same_day,p_same_day,star_same_day,rho_driver_leads,p_driver_leads,star_driver_leads,"
               "rho_target_leads,p_target_leads,star_target_leads,alpha,beta,r_squared,"
               "amihud_delta,liquidity_score,amihud_days,amihud_skipped_days,amihud_flag,"
               "btc_holdings,market_cap,gamma,group\n";
        for (const auto& r : b.firms) {
            const auto& s = r.stats;
            out << r.ticker << ',' << r.n_obs << ',' << format_real(s.mean) << ',' << format_real(s.median) << ','
                << format_real(s.std) << ',' << opt_str(s.skewness) << ',' << opt_str(s.excess_kurtosis) << ','
                << format_real(s.min) << ',' << format_real(s.max);
            for (const auto* c : {&r.corr.same_day, &r.corr.driver_leads, &r.corr.target_leads}) {
                out << ',' << format_real(c->rho) << ',' << format_real(c->p_value) << ',' << to_string(c->star);
            }
            out << ',' << format_real(r.sfm.alpha) << ',' << format_real(r.sfm.beta) << ','
                << format_real(r.sfm.r_squared);
            if (r.amihud) {
                out << ',' << format_real(r.amihud->delta) << ',' << format_real(r.amihud->liquidity_score) << ','
                    << r.amihud->n_days << ',' << r.amihud->n_skipped << ",ok";
            } else {
                out << ",,,,,skipped";
            }
            out << ',' << format_real(r.btc_holdings) << ',' << format_real(r.market_cap) << ','
                << format_real(r.gamma) << ',' << group_str(r.group) << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "te.csv");
        out << "ticker,te_xy,p_xy,null_mean_xy,null_std_xy,effective_te_xy,"
               "te_yx,p_yx,null_mean_yx,null_std_yx,effective_te_yx,n_shuffles\n";
        for (const auto& r : b.firms) {
            if (!r.te_xy || !r.te_yx) continue;
            out << r.ticker;
            for (const auto* t : {&*r.te_xy, &*r.te_yx}) {
                out << ',' << format_real(t->te_observed) << ',' << format_real(t->p_value) << ','
                    << format_real(t->null_mean) << ',' << format_real(t->null_std) << ','
                    << format_real(t->effective_te);
            }
            out << ',' << r.te_xy->n_shuffles << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "summary.csv");
        out << "measure,n,mean,median,std,skewness,kurtosis\n";
        for (const auto& s : b.summary) {
            out << s.measure << ',' << s.n << ',' << format_real(s.mean) << ',' << format_real(s.median) << ','
                << format_real(s.std) << ',' << format_real(s.skewness) << ',' << format_real(s.kurtosis) << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "warnings.csv");
        out << "ticker,reason\n";
        for (const auto& w : b.warnings) {
            std::string reason = w.reason;
            for (auto& ch : reason) {
                if (ch == ',' || ch == '\n') ch = ';';
            }
            out << w.ticker << ',' << reason << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "fig7_scatter.csv");
        out << "ticker,gamma,rho_same_day,liquidity_score,beta,high_beta,group\n";
        for (const auto& r : b.firms) {
            out << r.ticker << ',' << format_real(r.gamma) << ',' << format_real(r.corr.same_day.rho) << ','
                << (r.amihud ? format_real(r.amihud->liquidity_score) : "") << ',' << format_real(r.sfm.beta) << ','
                << (r.sfm.beta > 1.0 ? 1 : 0) << ',' << group_str(r.group) << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "fig8_rolling_long.csv");
        out << "ticker,end_date,direction,te,p_value,tier\n";
        for (const auto& e : b.rolling) {
            for (const auto* t : {&e.xy, &e.yx}) {
                for (const auto& w : t->windows) {
                    out << e.ticker << ',' << format_date(w.end_date) << ',' << to_string(t->direction) << ','
                        << format_real(w.te) << ',' << format_real(w.p_value) << ',' << to_string(w.tier) << '\n';
                }
            }
        }
    }
    for (const auto& e : b.rolling) {
        auto out = open_out(out_dir / ("rolling_" + e.ticker + ".csv"));
        write_rolling_csv(out, e.xy, e.yx);
    }
    {
        auto out = open_out(out_dir / "report.json");
        out << report_to_json(b);
    }
}

}  // namespace teflow
