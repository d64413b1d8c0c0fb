#include "elastoshock/csv.hpp"

#include <stdexcept>

namespace elastoshock {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()), path_(path) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_)
    throw std::runtime_error("CsvWriter: row width mismatch in " + path_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << fmt17(values[i]);
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("CsvWriter: write failure on " + path_);
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("CsvWriter: close failure on " + path_);
}

}  // namespace elastoshock
