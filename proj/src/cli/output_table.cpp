#include "mewma/cli/output_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mewma::cli {

namespace {

std::string format_number(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string plain_cell(const Cell& cell, ColumnKind kind) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  switch (kind) {
    case ColumnKind::integer: return format_number(v, "%.0f");
    case ColumnKind::arl: return format_number(v, std::abs(v) >= 100.0 ? "%.1f" : "%.2f");
    case ColumnKind::real:
    case ColumnKind::text: return format_number(v, "%.6g");
  }
  return {};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return csv_escape(*s);
  return format_number(std::get<double>(cell), "%.17g");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

Cell parse_field(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  return s;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "plain") return Format::plain;
  if (name == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + name + "' (plain or csv)");
}

OutputTable::OutputTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

std::vector<std::string> OutputTable::headers() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

void OutputTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("OutputTable: row has " + std::to_string(row.size()) + " cells, header has " +
                                std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

double OutputTable::number(std::size_t row, const std::string& name) const {
  const auto it = std::find_if(columns_.begin(), columns_.end(), [&](const Column& c) { return c.name == name; });
  if (it == columns_.end()) throw std::out_of_range("OutputTable: no column '" + name + "'");
  const auto& cell = rows_.at(row)[static_cast<std::size_t>(it - columns_.begin())];
  if (const auto* v = std::get_if<double>(&cell)) return *v;
  throw std::invalid_argument("OutputTable: column '" + name + "' is not numeric");
}

std::string OutputTable::render(Format format) const {
  std::ostringstream os;
  write(os, format);
  return os.str();
}

void OutputTable::write(std::ostream& os, Format format) const {
  if (format == Format::csv) {
    for (std::size_t j = 0; j < columns_.size(); ++j) os << (j ? "," : "") << csv_escape(columns_[j].name);
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_cell(row[j]);
      os << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) width[j] = columns_[j].name.size();
  for (const auto& row : rows_) {
    auto& out = text.emplace_back();
    for (std::size_t j = 0; j < row.size(); ++j) {
      out.push_back(plain_cell(row[j], columns_[j].kind));
      width[j] = std::max(width[j], out.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) os << "  ";
      os << std::string(width[j] - cells[j].size(), ' ') << cells[j];
    }
    os << '\n';
  };
  emit(headers());
  for (const auto& row : text) emit(row);
}

OutputTable OutputTable::parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: missing header row");
  std::vector<Column> columns;
  for (auto& name : split_csv_line(line)) columns.push_back({std::move(name), ColumnKind::real});
  OutputTable table(std::move(columns));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_field(f));
    table.add_row(std::move(row));
  }
  for (std::size_t j = 0; j < table.columns_.size(); ++j) {
    const bool textual = std::any_of(table.rows_.begin(), table.rows_.end(),
                                     [&](const auto& r) { return std::holds_alternative<std::string>(r[j]); });
    if (textual) table.columns_[j].kind = ColumnKind::text;
  }
  return table;
}

}  // namespace mewma::cli
