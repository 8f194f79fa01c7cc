#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsesel/app/config.hpp"

namespace sparsesel::app {

/// Fixed-precision text form used in every CSV so reruns are byte-identical.
std::string format_number(double value);

/// JSON value for a double; non-finite values become the strings "inf", "-inf", "nan".
Json json_number(double value);

/// "# config: {...}" and "# seed: N" lines that open every CSV output.
std::string provenance_header(const Json& resolved_config, std::uint64_t seed);

/// Writes `content` to `path`, creating parent directories; errors name the path.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Plain-text run log. Lines are echoed to stderr as they are added and written
/// to <out>/run.log by `save`. Nothing time-dependent goes into the file.
class RunLog {
 public:
  explicit RunLog(bool echo = true) : echo_(echo) {}
  void add(const std::string& line);
  const std::vector<std::string>& lines() const noexcept { return lines_; }
  void save(const std::filesystem::path& path) const;

 private:
  bool echo_;
  std::vector<std::string> lines_;
};

}  // namespace sparsesel::app
