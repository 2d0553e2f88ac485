// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Return panels: dated T x p matrices of simple returns with a missing-value
// mask, plus CSV ingestion, rolling windows and empirical support bounds.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sparsessd/error.hpp"

namespace sparsessd {

// Calendar date parsed from ISO-8601 "YYYY-MM-DD" or "YYYY-MM".
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  // Ordinal month index; the library works at monthly frequency.
  int month_index() const { return year * 12 + (month - 1); }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  friend auto operator<=>(const Date&, const Date&) = default;
};

inline bool parse_date(std::string_view text, Date& out) {
  auto read_int = [](std::string_view s, int& v) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (text.size() != 7 && text.size() != 10) return false;
  if (text[4] != '-') return false;
  Date d;
  if (!read_int(text.substr(0, 4), d.year)) return false;
  if (!read_int(text.substr(5, 2), d.month)) return false;
  if (text.size() == 10) {
    if (text[7] != '-') return false;
    if (!read_int(text.substr(8, 2), d.day)) return false;
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return false;
  out = d;
  return true;
}

inline Date parse_date_or_throw(std::string_view text) {
  Date d;
  if (!parse_date(text, d)) {
    throw ValidationError("malformed date '" + std::string(text) + "'");
  }
  return d;
}

// Empirical support [lower, upper] of all panel cells.
struct SupportBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Dated T x p matrix of simple returns. Values are stored row-major so a
// portfolio return X_t' lambda reads one contiguous row. Immutable after
// construction.
class ReturnPanel {
 public:
  ReturnPanel() = default;

  // Fully observed panel.
  ReturnPanel(std::vector<Date> dates, std::vector<std::string> assets,
              std::vector<double> values)
      : ReturnPanel(std::move(dates), std::move(assets), std::move(values),
                    {}) {}

  ReturnPanel(std::vector<Date> dates, std::vector<std::string> assets,
              std::vector<double> values, std::vector<unsigned char> mask)
      : dates_(std::move(dates)),
        assets_(std::move(assets)),
        values_(std::move(values)),
        mask_(std::move(mask)) {
    const std::size_t n = dates_.size() * assets_.size();
    if (values_.size() != n) {
      throw ValidationError("panel value count does not match T x p");
    }
    if (mask_.empty()) mask_.assign(n, 1);
    if (mask_.size() != n) {
      throw ValidationError("panel mask size does not match T x p");
    }
    validate();
  }

  // Undated panel (synthetic data); dates are consecutive months from 2000-01.
  static ReturnPanel from_matrix(std::size_t rows, std::size_t cols,
                                 std::vector<double> values,
                                 std::vector<std::string> assets = {}) {
    std::vector<Date> dates(rows);
    for (std::size_t t = 0; t < rows; ++t) {
      dates[t] = Date{2000 + static_cast<int>(t / 12),
                      static_cast<int>(t % 12) + 1, 1};
    }
    if (assets.empty()) {
      assets.resize(cols);
      for (std::size_t i = 0; i < cols; ++i) {
        assets[i] = "A" + std::to_string(i + 1);
      }
    }
    return ReturnPanel(std::move(dates), std::move(assets), std::move(values));
  }

  std::size_t rows() const { return dates_.size(); }
  std::size_t cols() const { return assets_.size(); }
  bool empty() const { return rows() == 0 || cols() == 0; }

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<std::string>& assets() const { return assets_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(std::size_t t, std::size_t i) const {
    return values_[t * cols() + i];
  }
  bool observed(std::size_t t, std::size_t i) const {
    return mask_[t * cols() + i] != 0;
  }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * cols(), cols()};
  }

  std::vector<double> column(std::size_t i) const {
    std::vector<double> out(rows());
    for (std::size_t t = 0; t < rows(); ++t) out[t] = (*this)(t, i);
    return out;
  }

  bool fully_observed() const {
    return std::all_of(mask_.begin(), mask_.end(),
                       [](unsigned char m) { return m != 0; });
  }

  std::size_t missing_count() const {
    return static_cast<std::size_t>(
        std::count(mask_.begin(), mask_.end(), static_cast<unsigned char>(0)));
  }

  // Index of an asset by name, or npos.
  std::size_t asset_index(std::string_view name) const {
    for (std::size_t i = 0; i < assets_.size(); ++i) {
      if (assets_[i] == name) return i;
    }
    return npos;
  }

  // Row of an exact date, or npos.
  std::size_t date_index(const Date& d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return npos;
    return static_cast<std::size_t>(it - dates_.begin());
  }

  // Contiguous rows [first, first + count), all columns.
  ReturnPanel slice_rows(std::size_t first, std::size_t count) const {
    if (first + count > rows()) throw RangeError("row slice exceeds panel");
    const std::size_t p = cols();
    std::vector<Date> d(dates_.begin() + first, dates_.begin() + first + count);
    std::vector<double> v(values_.begin() + first * p,
                          values_.begin() + (first + count) * p);
    std::vector<unsigned char> m(mask_.begin() + first * p,
                                 mask_.begin() + (first + count) * p);
    return ReturnPanel(std::move(d), assets_, std::move(v), std::move(m));
  }

  // Subset of columns in the given order, all rows.
  ReturnPanel select_columns(std::span<const std::size_t> idx) const {
    const std::size_t p = cols();
    std::vector<std::string> a;
    a.reserve(idx.size());
    for (std::size_t i : idx) {
      if (i >= p) throw RangeError("column index out of range");
      a.push_back(assets_[i]);
    }
    std::vector<double> v(rows() * idx.size());
    std::vector<unsigned char> m(rows() * idx.size());
    for (std::size_t t = 0; t < rows(); ++t) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        v[t * idx.size() + k] = values_[t * p + idx[k]];
        m[t * idx.size() + k] = mask_[t * p + idx[k]];
      }
    }
    return ReturnPanel(dates_, std::move(a), std::move(v), std::move(m));
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  void validate() const {
    for (std::size_t t = 1; t < dates_.size(); ++t) {
      if (!(dates_[t - 1] < dates_[t])) {
        throw ValidationError("dates not strictly increasing at row " +
                              std::to_string(t + 1) + " (" + dates_[t].iso() +
                              ")");
      }
    }
    std::unordered_set<std::string> seen;
    for (const auto& a : assets_) {
      if (!seen.insert(a).second) {
        throw ValidationError("duplicate asset identifier '" + a + "'");
      }
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (mask_[k] && !std::isfinite(values_[k])) {
        throw ValidationError("non-finite observed value in panel");
      }
    }
  }

  std::vector<Date> dates_;
  std::vector<std::string> assets_;
  std::vector<double> values_;
  std::vector<unsigned char> mask_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= line.size(); ++k) {
    if (k == line.size() || line[k] == ',') {
      out.push_back(trim(line.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

}  // namespace detail

// Parses CSV text with header `date,ASSET1,ASSET2,...`. Empty cells are
// missing; rows are 1-based in error messages (header is row 1).
inline ReturnPanel parse_panel_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> assets;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() < 2) {
      throw ParseError("header must name at least one asset", line_no, 1);
    }
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (cells[k].empty()) {
        throw ParseError("empty asset name in header", line_no, k + 1);
      }
      assets.emplace_back(cells[k]);
    }
    break;
  }
  if (assets.empty()) throw ParseError("missing header", line_no, 1);

  std::vector<Date> dates;
  std::vector<double> values;
  std::vector<unsigned char> mask;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != assets.size() + 1) {
      throw ParseError("expected " + std::to_string(assets.size() + 1) +
                           " cells, found " + std::to_string(cells.size()),
                       line_no, cells.size());
    }
    Date d;
    if (!parse_date(cells[0], d)) {
      throw ParseError("malformed date '" + std::string(cells[0]) + "'",
                       line_no, 1);
    }
    dates.push_back(d);
    for (std::size_t k = 1; k < cells.size(); ++k) {
      auto cell = cells[k];
      if (cell.empty() || cell == "NA" || cell == "NaN") {
        values.push_back(0.0);
        mask.push_back(0);
        continue;
      }
      double v = 0.0;
      if (cell.front() == '+') cell.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw ParseError("non-numeric cell '" + std::string(cells[k]) + "'",
                         line_no, k + 1);
      }
      values.push_back(v);
      mask.push_back(1);
    }
  }
  return ReturnPanel(std::move(dates), std::move(assets), std::move(values),
                     std::move(mask));
}

inline ReturnPanel load_panel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return parse_panel_csv(in);
}

inline void write_panel_csv(std::ostream& out, const ReturnPanel& panel) {
  out << "date";
  for (const auto& a : panel.assets()) out << ',' << a;
  out << '\n';
  char buf[64];
  for (std::size_t t = 0; t < panel.rows(); ++t) {
    out << panel.dates()[t].iso();
    for (std::size_t i = 0; i < panel.cols(); ++i) {
      out << ',';
      if (panel.observed(t, i)) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), panel(t, i));
        out.write(buf, ptr - buf);
      }
    }
    out << '\n';
  }
}

// Rows [first_row, first_row + length) with every asset that has a missing
// cell inside the window removed.
inline ReturnPanel window_and_filter(const ReturnPanel& panel,
                                     std::size_t first_row,
                                     std::size_t length) {
  if (length == 0 || first_row >= panel.rows() ||
      length > panel.rows() - first_row) {
    throw RangeError("window of " + std::to_string(length) +
                     " rows starting at row " + std::to_string(first_row) +
                     " exceeds panel of " + std::to_string(panel.rows()) +
                     " rows");
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < panel.cols(); ++i) {
    bool complete = true;
    for (std::size_t t = first_row; t < first_row + length && complete; ++t) {
      complete = panel.observed(t, i);
    }
    if (complete) keep.push_back(i);
  }
  if (keep.empty()) {
    throw EmptyUniverseError("no asset is fully observed in the window starting " +
                             panel.dates()[first_row].iso());
  }
  return panel.select_columns(keep).slice_rows(first_row, length);
}

inline ReturnPanel window_and_filter(const ReturnPanel& panel, const Date& start,
                                     std::size_t length) {
  const std::size_t first = panel.date_index(start);
  if (first == ReturnPanel::npos) {
    throw RangeError("window start " + start.iso() + " is not a panel date");
  }
  return window_and_filter(panel, first, length);
}

inline SupportBounds support_bounds(const ReturnPanel& panel) {
  if (panel.empty()) throw ValidationError("support of an empty panel");
  if (!panel.fully_observed()) {
    throw ValidationError("support bounds need a fully observed panel");
  }
  auto [lo, hi] = std::minmax_element(panel.values().begin(), panel.values().end());
  return {*lo, *hi};
}

}  // namespace sparsessd
