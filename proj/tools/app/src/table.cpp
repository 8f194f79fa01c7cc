#include "sparsesel/app/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsesel/errors.hpp"

namespace sparsesel::app {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null";
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  out.push_back(trim(cell));
  return out;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Table table;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_record(line);
    if (!have_header) {
      table.names = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.names.size()) {
      throw IngestionError(line_no, cells.size(),
                           "row " + std::to_string(line_no) + ": expected " + std::to_string(table.names.size()) +
                               " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> values(cells.size());
    bool missing = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      if (is_missing(cell)) {
        missing = true;
        continue;
      }
      const char* begin = cell.data() + (cell.front() == '+' ? 1 : 0);
      auto [end, ec] = std::from_chars(begin, cell.data() + cell.size(), values[c]);
      if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(values[c])) {
        throw IngestionError(line_no, c + 1,
                             "row " + std::to_string(line_no) + ", column " + std::to_string(c + 1) + " ('" +
                                 table.names[c] + "'): non-numeric value '" + cell + "'");
      }
    }
    if (missing) {
      ++table.rows_rejected;
    } else {
      rows.push_back(std::move(values));
    }
  }
  if (!have_header) throw IngestionError(1, 0, "empty CSV input: a header row is required");
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return table;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str());
  } catch (const IngestionError& e) {
    throw IngestionError(e.row(), e.column(), path.string() + ": " + e.what());
  }
}

Regression split_response(const Table& table, const std::string& response) {
  const auto it = std::find(table.names.begin(), table.names.end(), response);
  if (it == table.names.end()) throw InvalidArgumentError("response column '" + response + "' not found");
  const auto target = static_cast<Index>(it - table.names.begin());
  Regression out;
  out.y = table.values.col(target);
  out.x.resize(table.values.rows(), table.values.cols() - 1);
  Index k = 0;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == target) continue;
    out.x.col(k++) = table.values.col(c);
    out.feature_names.push_back(table.names[static_cast<std::size_t>(c)]);
  }
  return out;
}

}  // namespace sparsesel::app
