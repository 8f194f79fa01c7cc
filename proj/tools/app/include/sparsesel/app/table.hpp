#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel::app {

/// A cell that could not be read as a number. Rows and columns are 1-based, with
/// the header as row 1, so the coordinates match a spreadsheet view of the file.
class IngestionError : public std::runtime_error {
 public:
  IngestionError(std::size_t row, std::size_t column, const std::string& what)
      : std::runtime_error(what), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Numeric table read from a CSV file with a header row.
struct Table {
  std::vector<std::string> names;
  Matrix values;                 // rows x names.size()
  std::size_t rows_rejected = 0; // rows dropped for missing cells
};

/// Splits one CSV record (RFC 4180 quoting: "a,b" and "" inside quotes).
std::vector<std::string> split_csv_record(const std::string& line);

/// Reads a numeric CSV. Empty, NA and NaN cells mark a row as missing; such rows
/// are dropped and counted. Any other non-numeric cell raises IngestionError.
Table read_csv(const std::filesystem::path& path);
Table parse_csv(const std::string& text);

/// Splits a table into (design, response) by column name; throws InvalidArgumentError
/// when the response column is absent.
struct Regression {
  std::vector<std::string> feature_names;
  Matrix x;
  Vector y;
};
Regression split_response(const Table& table, const std::string& response);

}  // namespace sparsesel::app
