#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace snmix {

/// Input failure carrying the 1-based line number (0 = file-level).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}
  int line() const { return line_; }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  int line_;
};

/// Single-column CSV of finite reals; an optional non-numeric header line is
/// allowed in the first row only. Empty input is an error.
std::vector<double> read_real_column(const std::string& path);

/// Single-column CSV of nonnegative integers (same header rule).
std::vector<int> read_int_column(const std::string& path);

/// Custom rounding thresholds: one ascending real per line; an optional first
/// line "-inf" is accepted and skipped (a_0 is always -inf).
std::vector<double> read_thresholds_file(const std::string& path);

/// Shortest text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace snmix
