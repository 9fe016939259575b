#pragma once

// Domain types shared by every module. All day-of-year arithmetic uses a
// fixed 365-day calendar; leap days do not exist here.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "skillaudit/error.hpp"

namespace skillaudit {

inline constexpr int kDaysInYear = 365;
inline constexpr double kMinOnsetDoy = 1.0;
inline constexpr double kMaxOnsetDoy = 366.0;

namespace detail {
inline constexpr std::array<int, 12> kMonthLengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

inline bool strictly_increasing(std::span<const int> years) {
  return std::adjacent_find(years.begin(), years.end(), [](int a, int b) { return a >= b; }) == years.end();
}

inline bool onset_in_range(double v) { return std::isfinite(v) && v >= kMinOnsetDoy && v <= kMaxOnsetDoy; }
}  // namespace detail

/// 1-based day of year, non-leap calendar. doy_of(6, 1) == 152.
inline int doy_of(int month, int day) {
  if (month < 1 || month > 12) fail(ErrorKind::Calendar, "month " + std::to_string(month) + " outside 1..12");
  const int len = detail::kMonthLengths[static_cast<std::size_t>(month - 1)];
  if (day < 1 || day > len) {
    fail(ErrorKind::Calendar, "day " + std::to_string(day) + " invalid for month " + std::to_string(month));
  }
  int doy = day;
  for (int m = 0; m < month - 1; ++m) doy += detail::kMonthLengths[static_cast<std::size_t>(m)];
  return doy;
}

/// Inverse of doy_of: (month, day) for a day of year in 1..365.
inline std::pair<int, int> month_day_of(int doy) {
  if (doy < 1 || doy > kDaysInYear) fail(ErrorKind::Calendar, "day-of-year " + std::to_string(doy) + " outside 1..365");
  int month = 1;
  for (int len : detail::kMonthLengths) {
    if (doy <= len) break;
    doy -= len;
    ++month;
  }
  return {month, doy};
}

/// Inclusive range of calendar years.
struct PeriodSpec {
  int start_year = 0;
  int end_year = 0;

  PeriodSpec() = default;
  PeriodSpec(int start, int end) : start_year(start), end_year(end) {
    if (start > end) {
      fail(ErrorKind::Config, "period start " + std::to_string(start) + " after end " + std::to_string(end));
    }
  }

  bool contains(int year) const noexcept { return year >= start_year && year <= end_year; }
  int length() const noexcept { return end_year - start_year + 1; }
  std::vector<int> years() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(length()));
    for (int y = start_year; y <= end_year; ++y) out.push_back(y);
    return out;
  }

  friend bool operator==(const PeriodSpec&, const PeriodSpec&) = default;
};

/// Onset date per year (real-valued day of year). Years may have gaps.
class OnsetSeries {
 public:
  OnsetSeries() = default;
  OnsetSeries(std::vector<int> years, std::vector<double> onset) : years_(std::move(years)), onset_(std::move(onset)) {
    if (years_.size() != onset_.size()) fail(ErrorKind::Dimension, "years and onset lengths differ");
    if (!detail::strictly_increasing(years_)) fail(ErrorKind::Data, "onset years must be strictly increasing");
    for (std::size_t i = 0; i < onset_.size(); ++i) {
      if (!detail::onset_in_range(onset_[i])) {
        fail(ErrorKind::Data, "onset for year " + std::to_string(years_[i]) + " outside [1, 366]");
      }
    }
  }

  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<double>& onset() const noexcept { return onset_; }
  std::size_t size() const noexcept { return years_.size(); }
  bool empty() const noexcept { return years_.empty(); }

  std::optional<double> at(int year) const {
    auto it = std::lower_bound(years_.begin(), years_.end(), year);
    if (it == years_.end() || *it != year) return std::nullopt;
    return onset_[static_cast<std::size_t>(it - years_.begin())];
  }

  bool contains(int year) const { return std::binary_search(years_.begin(), years_.end(), year); }

  double mean() const {
    if (onset_.empty()) fail(ErrorKind::InsufficientSample, "mean of empty onset series");
    double sum = 0.0;
    for (double v : onset_) sum += v;
    return sum / static_cast<double>(onset_.size());
  }

  /// Subseries on the given years (those absent from the series are skipped).
  OnsetSeries select(std::span<const int> years) const {
    std::vector<int> ys;
    std::vector<double> vs;
    for (int y : years) {
      if (auto v = at(y)) {
        ys.push_back(y);
        vs.push_back(*v);
      }
    }
    return OnsetSeries(std::move(ys), std::move(vs));
  }

  friend bool operator==(const OnsetSeries&, const OnsetSeries&) = default;

 private:
  std::vector<int> years_;
  std::vector<double> onset_;
};

/// Keeps the (year, onset) pairs inside the period, order preserved.
inline OnsetSeries restrict(const OnsetSeries& series, const PeriodSpec& period) {
  std::vector<int> ys;
  std::vector<double> vs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (period.contains(series.years()[i])) {
      ys.push_back(series.years()[i]);
      vs.push_back(series.onset()[i]);
    }
  }
  return OnsetSeries(std::move(ys), std::move(vs));
}

/// Year x predictor matrix of anomalies, stored row-major. No missing values.
class PredictorPanel {
 public:
  PredictorPanel() = default;
  PredictorPanel(std::vector<int> years, std::vector<std::string> ids, std::vector<double> values)
      : years_(std::move(years)), ids_(std::move(ids)), values_(std::move(values)) {
    if (values_.size() != years_.size() * ids_.size()) {
      fail(ErrorKind::Dimension, "panel values do not match years x predictors");
    }
    if (!detail::strictly_increasing(years_)) fail(ErrorKind::Data, "panel years must be strictly increasing");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        fail(ErrorKind::Data, "non-finite panel value for year " + std::to_string(years_[i / ids_.size()]));
      }
    }
    auto sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail(ErrorKind::Data, "duplicate predictor id");
    }
  }

  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<std::string>& predictor_ids() const noexcept { return ids_; }
  std::size_t n_years() const noexcept { return years_.size(); }
  std::size_t n_predictors() const noexcept { return ids_.size(); }

  double value(std::size_t row, std::size_t col) const { return values_[row * ids_.size() + col]; }

  std::optional<std::size_t> row_of(int year) const {
    auto it = std::lower_bound(years_.begin(), years_.end(), year);
    if (it == years_.end() || *it != year) return std::nullopt;
    return static_cast<std::size_t>(it - years_.begin());
  }

  std::optional<std::size_t> column_of(const std::string& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
  }

  /// Column values for the listed years; every year must be present.
  std::vector<double> column(std::size_t col, std::span<const int> years) const {
    std::vector<double> out;
    out.reserve(years.size());
    for (int y : years) {
      auto row = row_of(y);
      if (!row) fail(ErrorKind::Data, "panel has no row for year " + std::to_string(y));
      out.push_back(value(*row, col));
    }
    return out;
  }

  /// Copy holding only the listed years (all must be present).
  PredictorPanel select_years(std::span<const int> years) const {
    std::vector<double> vals;
    vals.reserve(years.size() * ids_.size());
    for (int y : years) {
      auto row = row_of(y);
      if (!row) fail(ErrorKind::Data, "panel has no row for year " + std::to_string(y));
      for (std::size_t c = 0; c < ids_.size(); ++c) vals.push_back(value(*row, c));
    }
    return PredictorPanel(std::vector<int>(years.begin(), years.end()), ids_, std::move(vals));
  }

 private:
  std::vector<int> years_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// Daily values for one region. Each year's record covers a contiguous run of
/// days starting at first_doy.
class DailySeries {
 public:
  struct YearRecord {
    int first_doy = 1;
    std::vector<double> values;

    int last_doy() const noexcept { return first_doy + static_cast<int>(values.size()) - 1; }
  };

  DailySeries() = default;
  DailySeries(std::string region_id, std::map<int, YearRecord> records)
      : region_id_(std::move(region_id)), records_(std::move(records)) {
    for (const auto& [year, rec] : records_) {
      if (rec.first_doy < 1 || rec.last_doy() > kDaysInYear) {
        fail(ErrorKind::Data, "daily record for year " + std::to_string(year) + " leaves 1..365");
      }
      for (double v : rec.values) {
        if (!std::isfinite(v)) fail(ErrorKind::Data, "non-finite daily value in year " + std::to_string(year));
      }
    }
  }

  /// Builds from (year, doy, value) triples; days within a year must form a
  /// contiguous range without duplicates.
  static DailySeries from_triples(std::string region_id, std::vector<std::tuple<int, int, double>> triples) {
    std::sort(triples.begin(), triples.end(),
              [](const auto& a, const auto& b) { return std::pair(std::get<0>(a), std::get<1>(a)) < std::pair(std::get<0>(b), std::get<1>(b)); });
    std::map<int, YearRecord> records;
    for (const auto& [year, doy, value] : triples) {
      auto [it, inserted] = records.try_emplace(year, YearRecord{doy, {}});
      auto& rec = it->second;
      if (!inserted && doy != rec.last_doy() + 1) {
        fail(ErrorKind::Data, "daily record for year " + std::to_string(year) + " is not contiguous at day " +
                                  std::to_string(doy));
      }
      rec.values.push_back(value);
    }
    return DailySeries(std::move(region_id), std::move(records));
  }

  const std::string& region_id() const noexcept { return region_id_; }
  const std::map<int, YearRecord>& records() const noexcept { return records_; }

  std::optional<double> at(int year, int doy) const {
    auto it = records_.find(year);
    if (it == records_.end()) return std::nullopt;
    const auto& rec = it->second;
    if (doy < rec.first_doy || doy > rec.last_doy()) return std::nullopt;
    return rec.values[static_cast<std::size_t>(doy - rec.first_doy)];
  }

  bool covers(int year, int first_doy, int last_doy) const {
    auto it = records_.find(year);
    return it != records_.end() && first_doy >= it->second.first_doy && last_doy <= it->second.last_doy();
  }

 private:
  std::string region_id_;
  std::map<int, YearRecord> records_;
};

/// Predicted onsets for one method at one issue date.
class ForecastSet {
 public:
  ForecastSet() = default;
  ForecastSet(std::string method_id, int issue_doy, std::map<int, double> entries)
      : method_id_(std::move(method_id)), issue_doy_(issue_doy), entries_(std::move(entries)) {
    for (const auto& [year, v] : entries_) {
      if (!detail::onset_in_range(v)) {
        fail(ErrorKind::Data, "predicted onset for year " + std::to_string(year) + " outside [1, 366]");
      }
    }
  }

  const std::string& method_id() const noexcept { return method_id_; }
  int issue_doy() const noexcept { return issue_doy_; }
  const std::map<int, double>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<double> at(int year) const {
    auto it = entries_.find(year);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string method_id_;
  int issue_doy_ = 0;
  std::map<int, double> entries_;
};

}  // namespace skillaudit
