#include "snmix/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace snmix {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

template <typename OnValue>
void read_column(const std::string& path, OnValue&& on_value) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::string line;
  int lineno = 0;
  bool saw_value = false;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    double v;
    if (!parse_double(cell, v)) {
      if (first_content) {  // optional header row
        first_content = false;
        continue;
      }
      throw ParseError(path, lineno, "expected a number, got '" + cell + "'");
    }
    first_content = false;
    if (!std::isfinite(v)) throw ParseError(path, lineno, "value must be finite");
    on_value(v, lineno);
    saw_value = true;
  }
  if (!saw_value) throw ParseError(path, 0, "empty input: no data values found");
}

}  // namespace

std::vector<double> read_real_column(const std::string& path) {
  std::vector<double> out;
  read_column(path, [&](double v, int) { out.push_back(v); });
  return out;
}

std::vector<int> read_int_column(const std::string& path) {
  std::vector<int> out;
  read_column(path, [&](double v, int lineno) {
    if (v < 0.0) throw ParseError(path, lineno, "value must be nonnegative");
    if (v != std::floor(v) || v > 2147483000.0)
      throw ParseError(path, lineno, "value must be a nonnegative integer");
    out.push_back(static_cast<int>(v));
  });
  return out;
}

std::vector<double> read_thresholds_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    if (out.empty() && lineno == 1 && (cell == "-inf" || cell == "-Inf" || cell == "-INF"))
      continue;  // explicit a_0
    double v;
    if (!parse_double(cell, v) || !std::isfinite(v))
      throw ParseError(path, lineno, "expected a finite threshold, got '" + cell + "'");
    if (!out.empty() && !(v > out.back()))
      throw ParseError(path, lineno, "thresholds must be strictly increasing");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(path, 0, "no thresholds found");
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace snmix
