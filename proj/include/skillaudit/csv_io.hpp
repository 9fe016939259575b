#pragma once

// CSV ingestion and emission.
//
//   onset     year,onset_doy
//   forecast  year,predicted_doy[,...]   (an onset file is accepted too)
//   panel     year,<id1>,<id2>,...
//   daily     year,doy,value
//
// Comma separated, '.' decimal point, one header line. Any malformed row is
// rejected with a Data error naming the source and line number.

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit::csv {

namespace detail {

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Data, source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  std::vector<std::string> header() {
    std::vector<std::string> fields;
    if (!next(fields)) fail(ErrorKind::Data, source_ + ": empty file, header expected");
    return fields;
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      fields = split_line(line);
      return true;
    }
    return false;
  }

  int parse_int(const std::string& field, const char* what) const {
    int v = 0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end) error(std::string("non-integer ") + what + " '" + field + "'");
    return v;
  }

  double parse_double(const std::string& field, const char* what) const {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      error(std::string("non-numeric ") + what + " '" + field + "'");
    }
    return v;
  }

  int line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_no_ = 0;
};

inline void expect_header(const Reader& r, const std::vector<std::string>& got, const std::vector<std::string>& want) {
  if (got != want) {
    std::string joined;
    for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
    r.error("expected header '" + joined + "'");
  }
}

}  // namespace detail

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline OnsetSeries read_onset(std::istream& in, const std::string& source) {
  detail::Reader r(in, source);
  detail::expect_header(r, r.header(), {"year", "onset_doy"});
  std::map<int, double> rows;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != 2) r.error("expected 2 fields, got " + std::to_string(f.size()));
    const int year = r.parse_int(f[0], "year");
    const double doy = r.parse_double(f[1], "onset_doy");
    if (doy < kMinOnsetDoy || doy > kMaxOnsetDoy) r.error("onset_doy " + f[1] + " outside [1, 366]");
    if (!rows.emplace(year, doy).second) r.error("duplicate year " + f[0]);
  }
  std::vector<int> years;
  std::vector<double> values;
  for (const auto& [y, v] : rows) {
    years.push_back(y);
    values.push_back(v);
  }
  return OnsetSeries(std::move(years), std::move(values));
}

inline ForecastSet read_forecast(std::istream& in, const std::string& source, const std::string& method_id,
                                 int issue_doy = 0) {
  detail::Reader r(in, source);
  const auto head = r.header();
  if (head.empty() || head[0] != "year") r.error("first column must be 'year'");
  std::size_t col = 0;
  for (std::size_t i = 1; i < head.size(); ++i) {
    if (head[i] == "predicted_doy") col = i;
  }
  if (col == 0 && head.size() == 2 && head[1] == "onset_doy") col = 1;
  if (col == 0) r.error("no 'predicted_doy' column");
  std::map<int, double> rows;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != head.size()) r.error("expected " + std::to_string(head.size()) + " fields, got " + std::to_string(f.size()));
    const int year = r.parse_int(f[0], "year");
    const double doy = r.parse_double(f[col], "predicted_doy");
    if (doy < kMinOnsetDoy || doy > kMaxOnsetDoy) r.error("predicted_doy " + f[col] + " outside [1, 366]");
    if (!rows.emplace(year, doy).second) r.error("duplicate year " + f[0]);
  }
  return ForecastSet(method_id, issue_doy, std::move(rows));
}

inline PredictorPanel read_panel(std::istream& in, const std::string& source) {
  detail::Reader r(in, source);
  const auto head = r.header();
  if (head.size() < 2 || head[0] != "year") r.error("panel header must be 'year,<id>,...'");
  std::vector<std::string> ids(head.begin() + 1, head.end());
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) r.error("duplicate predictor id in header");
  std::map<int, std::vector<double>> rows;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != head.size()) r.error("expected " + std::to_string(head.size()) + " fields, got " + std::to_string(f.size()));
    const int year = r.parse_int(f[0], "year");
    std::vector<double> vals;
    for (std::size_t i = 1; i < f.size(); ++i) vals.push_back(r.parse_double(f[i], "predictor value"));
    if (!rows.emplace(year, std::move(vals)).second) r.error("duplicate year " + f[0]);
  }
  std::vector<int> years;
  std::vector<double> values;
  for (auto& [y, v] : rows) {
    years.push_back(y);
    values.insert(values.end(), v.begin(), v.end());
  }
  return PredictorPanel(std::move(years), std::move(ids), std::move(values));
}

inline DailySeries read_daily(std::istream& in, const std::string& source, const std::string& region_id) {
  detail::Reader r(in, source);
  detail::expect_header(r, r.header(), {"year", "doy", "value"});
  std::set<std::pair<int, int>> seen;
  std::vector<std::tuple<int, int, double>> triples;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != 3) r.error("expected 3 fields, got " + std::to_string(f.size()));
    const int year = r.parse_int(f[0], "year");
    const int doy = r.parse_int(f[1], "doy");
    if (doy < 1 || doy > kDaysInYear) r.error("doy " + f[1] + " outside 1..365");
    const double value = r.parse_double(f[2], "value");
    if (!seen.emplace(year, doy).second) r.error("duplicate (year, doy) " + f[0] + "," + f[1]);
    triples.emplace_back(year, doy, value);
  }
  return DailySeries::from_triples(region_id, std::move(triples));
}

inline void write_onset(std::ostream& out, const OnsetSeries& series) {
  out << "year,onset_doy\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series.years()[i] << ',' << format_number(series.onset()[i]) << '\n';
  }
}

inline void write_panel(std::ostream& out, const PredictorPanel& panel) {
  out << "year";
  for (const auto& id : panel.predictor_ids()) out << ',' << id;
  out << '\n';
  for (std::size_t r = 0; r < panel.n_years(); ++r) {
    out << panel.years()[r];
    for (std::size_t c = 0; c < panel.n_predictors(); ++c) out << ',' << format_number(panel.value(r, c));
    out << '\n';
  }
}

inline void write_daily(std::ostream& out, const DailySeries& series) {
  out << "year,doy,value\n";
  for (const auto& [year, rec] : series.records()) {
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
      out << year << ',' << rec.first_doy + static_cast<int>(i) << ',' << format_number(rec.values[i]) << '\n';
    }
  }
}

/// year,predicted_doy,observed_doy (observed left empty when unknown).
inline void write_forecast(std::ostream& out, const ForecastSet& forecasts, const OnsetSeries& obs) {
  out << "year,predicted_doy,observed_doy\n";
  for (const auto& [year, value] : forecasts.entries()) {
    out << year << ',' << format_number(value) << ',';
    if (auto o = obs.at(year)) out << format_number(*o);
    out << '\n';
  }
}

}  // namespace skillaudit::csv
