#include "teflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "teflow/errors.hpp"

namespace teflow {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::size_t line, std::string_view field) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("unparseable " + std::string(field) + " '" + std::string(text) + "'", line);
    }
    return v;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PriceSeries parse_prices(std::istream& in, std::string ticker) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<PriceObservation> rows;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "date" || fields[1] != "close" || fields[2] != "dollar_volume") {
                throw ParseError("expected header 'date,close,dollar_volume'", lineno);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw ParseError("expected 3 fields, found " + std::to_string(fields.size()), lineno);
        }
        const auto date = parse_date(fields[0]);
        if (!date) throw ParseError("invalid date '" + fields[0] + "'", lineno);
        const double close = parse_double(fields[1], lineno, "close");
        if (!std::isfinite(close) || close <= 0.0) throw ParseError("close must be positive and finite", lineno);
        double volume = std::numeric_limits<double>::quiet_NaN();
        if (!fields[2].empty()) {
            volume = parse_double(fields[2], lineno, "dollar_volume");
            if (!std::isfinite(volume) || volume < 0.0) {
                throw ParseError("dollar_volume must be finite and non-negative", lineno);
            }
        }
        rows.push_back({*date, close, volume});
        row_lines.push_back(lineno);
    }
    if (!header_seen) throw ParseError("empty price file");

    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rows[a].date < rows[b].date; });
    std::vector<PriceObservation> sorted;
    sorted.reserve(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& r = rows[order[i]];
        if (!sorted.empty() && sorted.back().date == r.date) {
            throw IntegrityError(ticker + ": duplicate date " + format_date(r.date) + " (line " +
                                 std::to_string(row_lines[order[i]]) + ")");
        }
        sorted.push_back(r);
    }
    return PriceSeries(std::move(ticker), std::move(sorted));
}

PriceSeries load_prices(const std::filesystem::path& path, std::string ticker) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open price file " + path.string());
    if (ticker.empty()) ticker = path.stem().string();
    try {
        return parse_prices(in, std::move(ticker));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.detail(), e.line());
    }
}

void write_prices(const std::filesystem::path& path, const PriceSeries& prices) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "date,close,dollar_volume\n";
    for (const auto& o : prices.observations()) {
        out << format_date(o.date) << ',' << format_real(o.close) << ',' << format_real(o.dollar_volume) << '\n';
    }
}

}  // namespace teflow
