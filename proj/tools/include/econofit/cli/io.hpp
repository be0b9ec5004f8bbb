#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "econofit/model.hpp"

namespace econofit::cli {

/// Bad user input: files, configs, command arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest representation that parses back to the same double; NaN is "NA".
std::string format_double(double v);

/// Whole-string double parse; throws InputError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based file line of every row

  /// Column index of `name`, or npos.
  std::size_t column(std::string_view name) const;
  std::size_t require_column(std::string_view name, const std::filesystem::path& path) const;
};

/// Comma separated with a header line. Cells are trimmed, a UTF-8 byte order
/// mark is dropped, blank lines are skipped and double-quoted cells may
/// contain commas.
CsvTable read_csv(const std::filesystem::path& path);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  void end_row();
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  bool first_ = true;
};

struct PriceTable {
  std::vector<std::string> dates;
  std::vector<double> log_prices;
};

/// Reads `date,price` or `date,log_price` columns. Prices are logged. Dates
/// must strictly increase, compared as numbers when every date is numeric
/// and as text otherwise. No length requirement.
PriceTable read_price_table(const std::filesystem::path& path);

/// read_price_table plus the PriceSeries length and finiteness checks.
PriceSeries ingest_prices(const std::filesystem::path& path);

void write_prices(const std::filesystem::path& path, const std::vector<std::string>& dates,
                  const std::vector<double>& log_prices);

}  // namespace econofit::cli
