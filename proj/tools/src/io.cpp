#include "econofit/cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace econofit::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(std::string_view line, const std::filesystem::path& path, std::size_t number) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      cells.emplace_back(was_quoted ? cell : std::string(trim(cell)));
      cell.clear();
      was_quoted = false;
    } else {
      cell += ch;
    }
  }
  if (quoted) throw InputError(path.string() + ": unterminated quote at row " + std::to_string(number));
  cells.emplace_back(was_quoted ? cell : std::string(trim(cell)));
  return cells;
}

std::optional<double> as_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  if (t == "NA" || t == "nan") return NAN;
  if (t == "inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  const auto v = as_number(t);
  if (!v) throw InputError("non-numeric " + std::string(what) + ": '" + std::string(t) + "'");
  return *v;
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? std::string::npos : static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::require_column(std::string_view name, const std::filesystem::path& path) const {
  const std::size_t c = column(name);
  if (c == std::string::npos) throw InputError(path.string() + ": missing column '" + std::string(name) + "'");
  return c;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (number == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    auto cells = split_line(view, path, number);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw InputError(path.string() + ": row " + std::to_string(number) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
    table.lines.push_back(number);
  }
  if (!have_header) throw InputError(path.string() + ": empty file");
  return table;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw InputError("cannot write " + path.string());
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (!first_) out_ << ',';
  first_ = false;
  if (text.find_first_of(",\"\n") != std::string_view::npos) {
    out_ << '"';
    for (char ch : text) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
  } else {
    out_ << text;
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
  if (!out_) throw InputError("write failed: " + path_.string());
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (const auto& c : cells) cell(std::string_view(c));
  end_row();
}

PriceTable read_price_table(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t date_col = table.require_column("date", path);
  const std::size_t price_col = table.column("price");
  const std::size_t log_col = table.column("log_price");
  if (price_col == std::string::npos && log_col == std::string::npos)
    throw InputError(path.string() + ": missing column 'price' or 'log_price'");
  if (price_col != std::string::npos && log_col != std::string::npos)
    throw InputError(path.string() + ": both 'price' and 'log_price' columns present");
  const bool logged = log_col != std::string::npos;
  const std::size_t value_col = logged ? log_col : price_col;

  PriceTable out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string at = " at row " + std::to_string(table.lines[r]);
    const auto v = as_number(row[value_col]);
    if (!v || !std::isfinite(*v))
      throw InputError(path.string() + ": non-numeric " + table.header[value_col] + " '" + row[value_col] + "'" + at);
    if (!logged && !(*v > 0.0))
      throw InputError(path.string() + ": price must be positive" + at);
    if (row[date_col].empty()) throw InputError(path.string() + ": empty date" + at);
    out.dates.push_back(row[date_col]);
    out.log_prices.push_back(logged ? *v : std::log(*v));
  }

  std::vector<std::optional<double>> numeric;
  bool all_numeric = true;
  for (const auto& d : out.dates) {
    numeric.push_back(as_number(d));
    all_numeric = all_numeric && numeric.back().has_value();
  }
  for (std::size_t r = 1; r < out.dates.size(); ++r) {
    const std::string at = " at row " + std::to_string(table.lines[r]);
    if (out.dates[r] == out.dates[r - 1] || (all_numeric && *numeric[r] == *numeric[r - 1]))
      throw InputError(path.string() + ": duplicate date '" + out.dates[r] + "'" + at);
    const bool ordered = all_numeric ? *numeric[r] > *numeric[r - 1] : out.dates[r] > out.dates[r - 1];
    if (!ordered) throw InputError(path.string() + ": non-chronological" + at);
  }
  return out;
}

PriceSeries ingest_prices(const std::filesystem::path& path) {
  PriceTable table = read_price_table(path);
  if (table.log_prices.size() < PriceSeries::kMinLength)
    throw InputError(path.string() + ": " + std::to_string(table.log_prices.size()) + " rows, at least " +
                     std::to_string(PriceSeries::kMinLength) + " required");
  return PriceSeries(std::move(table.log_prices), std::move(table.dates));
}

void write_prices(const std::filesystem::path& path, const std::vector<std::string>& dates,
                  const std::vector<double>& log_prices) {
  CsvWriter w(path);
  w.row({"date", "log_price"});
  for (std::size_t t = 0; t < log_prices.size(); ++t) {
    if (dates.empty())
      w.cell(t + 1);
    else
      w.cell(std::string_view(dates[t]));
    w.cell(log_prices[t]).end_row();
  }
}

}  // namespace econofit::cli
