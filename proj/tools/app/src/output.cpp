#include "sparsesel/app/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace sparsesel::app {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

Json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_number(value);
}

std::string provenance_header(const Json& resolved_config, std::uint64_t seed) {
  return "# config: " + resolved_config.dump() + "\n# seed: " + std::to_string(seed) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void RunLog::add(const std::string& line) {
  lines_.push_back(line);
  if (echo_) std::cerr << line << '\n';
}

void RunLog::save(const std::filesystem::path& path) const {
  std::string text;
  for (const auto& line : lines_) text += line + '\n';
  write_file(path, text);
}

}  // namespace sparsesel::app
