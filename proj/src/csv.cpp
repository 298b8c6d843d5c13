#include "gpstop/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "gpstop/errors.hpp"

namespace gpstop {

CsvSchema csv_schema_from_string(std::string_view name) {
  if (name == "wide") return CsvSchema::Wide;
  if (name == "long") return CsvSchema::Long;
  throw std::invalid_argument("unknown CSV schema: " + std::string(name));
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open file: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_csv_double(const std::string& cell, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                    ", column " + std::to_string(column));
  }
  return value;
}

namespace {

std::vector<PriceSeries> load_wide(const std::vector<std::string>& lines,
                                   const std::string& name) {
  const auto header = split_csv_line(lines.front());
  if (header.size() < 2 || header.front() != "series_id") {
    throw DataError("wide CSV header must be 'series_id,t1,...,tT' in " + name);
  }
  const std::size_t horizon = header.size() - 1;

  std::vector<PriceSeries> series;
  std::set<std::string> seen_ids;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      throw DataError("ragged row " + std::to_string(r + 1) + ": has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    if (!seen_ids.insert(cells[0]).second) {
      throw DataError("duplicate series_id '" + cells[0] + "' at row " + std::to_string(r + 1));
    }
    PriceSeries s;
    s.id = cells[0];
    s.values.resize(static_cast<Eigen::Index>(horizon));
    for (std::size_t c = 1; c < cells.size(); ++c) {
      s.values[static_cast<Eigen::Index>(c - 1)] = parse_csv_double(cells[c], r + 1, c + 1);
    }
    series.push_back(std::move(s));
  }
  return series;
}

std::vector<PriceSeries> load_long(const std::vector<std::string>& lines,
                                   const std::string& name) {
  const auto header = split_csv_line(lines.front());
  if (header.size() != 3 || header[0] != "series_id" || header[1] != "t" ||
      header[2] != "price") {
    throw DataError("long CSV header must be 'series_id,t,price' in " + name);
  }

  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != 3) {
      throw DataError("ragged row " + std::to_string(r + 1) + ": has " +
                      std::to_string(cells.size()) + " cells, expected 3");
    }
    const double t = parse_csv_double(cells[1], r + 1, 2);
    const double price = parse_csv_double(cells[2], r + 1, 3);
    groups[cells[0]].emplace_back(t, price);
  }

  std::vector<PriceSeries> series;
  std::size_t horizon = 0;
  for (auto& [id, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].first == rows[i - 1].first) {
        throw DataError("duplicate (series_id, t) = (" + id + ", " +
                        format_double(rows[i].first) + ")");
      }
    }
    if (horizon == 0) horizon = rows.size();
    if (rows.size() != horizon) {
      throw DataError("series '" + id + "' has " + std::to_string(rows.size()) +
                      " rows, expected " + std::to_string(horizon));
    }
    PriceSeries s;
    s.id = id;
    s.values.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s.values[static_cast<Eigen::Index>(i)] = rows[i].second;
    }
    series.push_back(std::move(s));
  }
  return series;
}

}  // namespace

std::vector<PriceSeries> load_csv(const std::filesystem::path& path, CsvSchema schema) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw DataError("empty CSV file: " + path.string());
  }
  auto series = schema == CsvSchema::Wide ? load_wide(lines, path.string())
                                          : load_long(lines, path.string());
  if (series.empty()) {
    throw DataError("no data rows in " + path.string());
  }
  return series;
}

void write_prices_csv(const std::filesystem::path& path,
                      const std::vector<PriceSeries>& series) {
  if (series.empty()) {
    throw std::invalid_argument("refusing to write an empty price CSV");
  }
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write file: " + path.string());
  }
  out << "series_id";
  for (Eigen::Index t = 0; t < series.front().length(); ++t) out << ",t" << (t + 1);
  out << "\n";
  for (const auto& s : series) {
    out << s.id;
    for (Eigen::Index t = 0; t < s.length(); ++t) out << "," << format_double(s.values[t]);
    out << "\n";
  }
}

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace gpstop
