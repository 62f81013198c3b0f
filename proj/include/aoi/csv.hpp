#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "aoi/errors.hpp"

namespace aoi {

// 12 significant digits, '.' decimal separator; snprintf keeps the output
// byte-stable across runs.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Minimal CSV emitter: one header row, numeric cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw ValidationError({"output: cannot open " + path.string()});
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(std::span<const double> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_number(cells[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace aoi
