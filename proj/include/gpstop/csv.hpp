#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gpstop/series.hpp"

namespace gpstop {

enum class CsvSchema { Wide, Long };

CsvSchema csv_schema_from_string(std::string_view name);

/// Wide schema: header `series_id,t1,...,tT`, one row per series.
/// Long schema: header `series_id,t,price`; rows may arrive in any order and
/// are grouped by series id (ascending) and sorted by t. Both schemas
/// require every series to cover the same horizon. Malformed input throws
/// DataError naming the offending row and column (1-based).
std::vector<PriceSeries> load_csv(const std::filesystem::path& path, CsvSchema schema);

/// Writes the wide schema with shortest round-trip number formatting.
void write_prices_csv(const std::filesystem::path& path,
                      const std::vector<PriceSeries>& series);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Lines of a text file with trailing '\r' stripped; throws DataError when
/// the file cannot be read.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a full-cell finite double; row/column only label the error.
double parse_csv_double(const std::string& cell, std::size_t row, std::size_t column);

}  // namespace gpstop
