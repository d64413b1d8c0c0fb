#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace elastoshock {

/// Formats a double with 17 significant digits (round-trip exact), the fixed
/// format for every CSV the library writes.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Line-oriented CSV writer with a fixed header. Values are either fmt17
/// doubles or verbatim strings. Throws std::runtime_error on I/O failure.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
  std::size_t width_;
  std::string path_;
};

}  // namespace elastoshock
