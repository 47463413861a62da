#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/model.hpp"

namespace uwarma {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips a double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (quoted) {
      if (ch == '"') quoted = false;
      else cur.push_back(ch);
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_double_field(const std::string& field, std::size_t line_no,
                                 const std::string& column) {
  if (field.empty()) {
    throw CsvError("line " + std::to_string(line_no) + ", column '" + column +
                   "': missing value");
  }
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
  if (ec != std::errc() || ptr != last) {
    throw CsvError("line " + std::to_string(line_no) + ", column '" + column +
                   "': cannot parse '" + field + "' as a number");
  }
  return v;
}

}  // namespace detail

struct CsvLoadOptions {
  /// Divide y by 100 on load, for data reported on a 0-100 percent scale.
  bool rescale_percent = false;
};

struct LoadedSeries {
  SeriesData data;
  std::vector<std::string> covariate_names;
  std::vector<std::string> dates;  // empty when the file has no date column
};

/// Reads a headered CSV with a mandatory 'y' column (the response), an
/// optional 'date' column passed through verbatim, and any number of
/// numeric covariate columns. Boundary responses are rejected since the
/// model lives strictly inside (0,1).
inline LoadedSeries load_series_csv(const std::string& path, const CsvLoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw CsvError("'" + path + "': empty file, header expected");
  auto header = detail::split_csv_line(line);

  std::ptrdiff_t y_col = -1, date_col = -1;
  std::vector<std::size_t> cov_cols;
  LoadedSeries out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      y_col = static_cast<std::ptrdiff_t>(c);
    } else if (header[c] == "date") {
      date_col = static_cast<std::ptrdiff_t>(c);
    } else {
      cov_cols.push_back(c);
      out.covariate_names.push_back(header[c]);
    }
  }
  if (y_col < 0) throw CsvError("'" + path + "': no 'y' column in header");

  std::vector<double> yv;
  std::vector<std::vector<double>> cov(cov_cols.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(header.size()) + " fields, found " +
                     std::to_string(fields.size()));
    }
    double y = detail::parse_double_field(fields[y_col], line_no, "y");
    if (opts.rescale_percent) y /= 100.0;
    if (!(y > 0.0 && y < 1.0)) {
      throw CsvError("line " + std::to_string(line_no) + ": y=" + fields[y_col] +
                     " is outside (0,1); boundary values make the model degenerate -- "
                     "rescale the data (e.g. --rescale-percent for 0-100 data) or drop the row");
    }
    yv.push_back(y);
    for (std::size_t k = 0; k < cov_cols.size(); ++k) {
      cov[k].push_back(
          detail::parse_double_field(fields[cov_cols[k]], line_no, header[cov_cols[k]]));
    }
    if (date_col >= 0) out.dates.push_back(fields[date_col]);
  }
  if (yv.empty()) throw CsvError("'" + path + "': no data rows");

  out.data.y = std::move(yv);
  if (!cov.empty()) {
    out.data.X = Matrix(out.data.y.size(), cov.size());
    for (std::size_t t = 0; t < out.data.y.size(); ++t)
      for (std::size_t k = 0; k < cov.size(); ++k) out.data.X(t, k) = cov[k][t];
  }
  out.data.validate();
  return out;
}

/// Writes the complementary format of load_series_csv.
inline void save_series_csv(const std::string& path, const LoadedSeries& series) {
  std::ofstream outf(path);
  if (!outf) throw CsvError("cannot open '" + path + "' for writing");
  const bool has_dates = !series.dates.empty();
  outf << (has_dates ? "date,y" : "y");
  for (const auto& name : series.covariate_names) outf << ',' << name;
  outf << '\n';
  for (std::size_t t = 0; t < series.data.y.size(); ++t) {
    if (has_dates) outf << series.dates[t] << ',';
    outf << format_double(series.data.y[t]);
    for (std::size_t k = 0; k < series.data.X.cols; ++k)
      outf << ',' << format_double(series.data.X(t, k));
    outf << '\n';
  }
  if (!outf) throw CsvError("write failed for '" + path + "'");
}

}  // namespace uwarma
