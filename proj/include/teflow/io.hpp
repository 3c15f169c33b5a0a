#ifndef TEFLOW_IO_HPP
#define TEFLOW_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/timeseries.hpp"

namespace teflow {

/// Splits one CSV line on commas and trims surrounding whitespace. No quoting.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a full-string decimal number; throws ParseError on failure.
double parse_double(std::string_view text, std::size_t line, std::string_view field);

/// "%.17g": enough digits for an exact round-trip. NaN is written as "".
std::string format_real(double v);

/// Price CSV with header `date,close,dollar_volume`. Rows may come in any
/// order and are sorted by date; an empty dollar_volume cell means "not
/// reported". The ticker defaults to the file stem.
PriceSeries load_prices(const std::filesystem::path& path, std::string ticker = {});
PriceSeries parse_prices(std::istream& in, std::string ticker);

void write_prices(const std::filesystem::path& path, const PriceSeries& prices);

}  // namespace teflow

#endif  // TEFLOW_IO_HPP
