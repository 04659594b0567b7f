#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ios>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cascadefund {

#ifndef CASCADEFUND_VERSION
#define CASCADEFUND_VERSION "0.1.0"
#endif

inline constexpr const char* kVersion = CASCADEFUND_VERSION;

// Nine significant digits.
inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// JSON numbers rounded to nine significant digits.  Keys come out sorted
// because nlohmann::json stores objects in a std::map.
inline nlohmann::json round9(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return fmt_num(v);
    return std::stod(fmt_num(v));
  }
  if (j.is_array() || j.is_object()) {
    nlohmann::json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round9(*it);
    return out;
  }
  return j;
}

inline std::string dump_json(const nlohmann::json& j) {
  return round9(j).dump(2) + "\n";
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const nlohmann::json& config,
            const std::string& command)
      : os_(os) {
    os_ << "# cascadefund " << kVersion << " " << command << "\n";
    os_ << "# config " << round9(config).dump() << "\n";
  }

  void comment(const std::string& line) { os_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& cols) {
    ncols_ = cols.size();
    row_strings(cols);
  }

  CsvWriter& cell(double v) { return put(fmt_num(v)); }
  CsvWriter& cell(int v) { return put(std::to_string(v)); }
  CsvWriter& cell(long long v) { return put(std::to_string(v)); }
  CsvWriter& cell(unsigned long long v) { return put(std::to_string(v)); }
  CsvWriter& cell(unsigned long v) { return put(std::to_string(v)); }
  CsvWriter& cell(bool v) { return put(v ? "1" : "0"); }

  void end_row() {
    if (ncols_ != 0 && in_row_ != ncols_) {
      throw std::logic_error("csv row has " + std::to_string(in_row_) +
                             " cells, header has " + std::to_string(ncols_));
    }
    os_ << "\n";
    in_row_ = 0;
  }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ",";
      os_ << cells[i];
    }
    os_ << "\n";
  }

  CsvWriter& put(const std::string& s) {
    if (in_row_) os_ << ",";
    os_ << s;
    ++in_row_;
    return *this;
  }

  std::ostream& os_;
  std::size_t ncols_ = 0;
  std::size_t in_row_ = 0;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  f << text;
}

// Summary path next to a data file: out.csv -> out.summary.json.
inline std::string summary_path_for(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  const std::string stem =
      dot != std::string::npos && (slash == std::string::npos || dot > slash)
          ? out.substr(0, dot)
          : out;
  return stem + ".summary.json";
}

}  // namespace cascadefund
