#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mewma::cli {

enum class Format { plain, csv };

Format parse_format(const std::string& name);

/// How a numeric column is printed in plain format.  csv always uses 17
/// significant digits.
enum class ColumnKind {
  text,
  integer,
  arl,   // >= 100: 1 decimal, otherwise 2
  real,  // up to 6 significant digits
};

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::real;
};

using Cell = std::variant<double, std::string>;

class OutputTable {
 public:
  OutputTable() = default;
  explicit OutputTable(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::vector<std::string> headers() const;

  /// Throws std::invalid_argument when the arity differs from the header.
  void add_row(std::vector<Cell> row);

  /// Numeric cell (row, column named `name`); throws if absent or textual.
  double number(std::size_t row, const std::string& name) const;

  std::string render(Format format) const;
  void write(std::ostream& os, Format format) const;

  /// Parses csv produced by render(Format::csv).  Fields that parse fully as
  /// numbers become doubles; column kinds are not recoverable and are set
  /// to real/text.
  static OutputTable parse_csv(const std::string& text);

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace mewma::cli
