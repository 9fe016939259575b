#pragma once

// Forecast schemes: climatology, trend-threshold extrapolation at a tipping
// element, and screening + principal component regression hindcasts.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/pcr.hpp"
#include "skillaudit/protocols.hpp"
#include "skillaudit/skill.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

inline ForecastSet climatology_forecast(const OnsetSeries& train, std::span<const int> target_years, int issue_doy = 0) {
  if (train.empty()) fail(ErrorKind::InsufficientSample, "climatology needs a nonempty training series");
  const double mean = train.mean();
  std::map<int, double> entries;
  for (int y : target_years) entries.emplace(y, mean);
  return ForecastSet("climatology", issue_doy, std::move(entries));
}

enum class NoCrossingFallback { Error, Climatology };

struct TEConfig {
  int issue_doy = 125;  // May 5
  int trend_window_days = 14;
  int season_end_doy = 243;  // Aug 31
  NoCrossingFallback fallback = NoCrossingFallback::Error;

  void validate() const {
    if (trend_window_days < 2) fail(ErrorKind::Config, "trend window must span at least 2 days");
    if (!(issue_doy < season_end_doy && season_end_doy <= kDaysInYear)) {
      fail(ErrorKind::Config, "need issue_doy < season_end_doy <= 365");
    }
    if (issue_doy - trend_window_days + 1 < 1) fail(ErrorKind::Config, "trend window starts before day 1");
  }
};

/// Least-squares line through (t, v(t)) written around the window centre so
/// exactly linear inputs come back without rounding drift.
struct TrendLine {
  double centre_day = 0.0;
  double centre_value = 0.0;
  double slope = 0.0;

  double at(double day) const noexcept { return centre_value + slope * (day - centre_day); }
};

inline TrendLine fit_trend(const DailySeries& series, int year, int first_doy, int last_doy) {
  if (!series.covers(year, first_doy, last_doy)) {
    fail(ErrorKind::Data, series.region_id() + " lacks days " + std::to_string(first_doy) + ".." +
                              std::to_string(last_doy) + " in " + std::to_string(year));
  }
  const auto n = static_cast<double>(last_doy - first_doy + 1);
  TrendLine line;
  line.centre_day = 0.5 * (first_doy + last_doy);
  double sum = 0.0;
  for (int d = first_doy; d <= last_doy; ++d) sum += *series.at(year, d);
  line.centre_value = sum / n;
  double sxy = 0.0, sxx = 0.0;
  for (int d = first_doy; d <= last_doy; ++d) {
    const double dt = d - line.centre_day;
    sxy += dt * (*series.at(year, d) - line.centre_value);
    sxx += dt * dt;
  }
  line.slope = sxy / sxx;
  return line;
}

/// Extrapolates the trend of the last trend_window_days before issue and
/// returns the first day after issue on which the line strictly exceeds
/// threshold. Throws NoCrossing when the slope is not positive or the
/// crossing falls after season_end_doy, unless the config falls back to a
/// supplied climatological onset.
inline double te_forecast(const DailySeries& t_np, double threshold, int year, const TEConfig& cfg,
                          std::optional<double> climatology = std::nullopt) {
  cfg.validate();
  const auto line = fit_trend(t_np, year, cfg.issue_doy - cfg.trend_window_days + 1, cfg.issue_doy);

  auto no_crossing = [&](const std::string& why) -> double {
    if (cfg.fallback == NoCrossingFallback::Climatology) {
      if (!climatology) fail(ErrorKind::Config, "climatology fallback requested without a climatological onset");
      return *climatology;
    }
    fail(ErrorKind::NoCrossing, why + " in " + std::to_string(year));
  };

  if (!(line.slope > 0.0)) return no_crossing("trend is not rising");
  // Analytic crossing, then nudge to the first integer day that strictly
  // exceeds the threshold.
  const double crossing = line.centre_day + (threshold - line.centre_value) / line.slope;
  double day = std::max(static_cast<double>(cfg.issue_doy + 1), std::floor(crossing));
  while (day > cfg.issue_doy + 1 && line.at(day - 1.0) > threshold) day -= 1.0;
  while (day <= cfg.season_end_doy && !(line.at(day) > threshold)) day += 1.0;
  if (day > cfg.season_end_doy) return no_crossing("trend does not cross the threshold before season end");
  return day;
}

/// Mean training onset rounded half up to a day.
inline int climatological_onset_day(const OnsetSeries& train_onsets) {
  return static_cast<int>(std::floor(train_onsets.mean() + 0.5));
}

/// Climatological T_EG at the climatological onset day, averaged over the
/// training years.
inline double te_threshold(const DailySeries& t_eg, const OnsetSeries& train_onsets) {
  if (train_onsets.empty()) fail(ErrorKind::InsufficientSample, "threshold needs training onsets");
  const int day = climatological_onset_day(train_onsets);
  double sum = 0.0;
  for (int year : train_onsets.years()) {
    auto v = t_eg.at(year, day);
    if (!v) {
      fail(ErrorKind::Data, t_eg.region_id() + " lacks day " + std::to_string(day) + " in " + std::to_string(year));
    }
    sum += *v;
  }
  return sum / static_cast<double>(train_onsets.size());
}

struct TEYearOutcome {
  int year = 0;
  double threshold = 0.0;
  double climatology = 0.0;
  std::optional<double> te;  // empty when no crossing and no fallback
  std::string status;        // "ok", "fallback" or "no_crossing"
};

struct TEHindcast {
  ForecastSet te;
  ForecastSet climatology;
  std::vector<TEYearOutcome> years;
};

/// Per fold: threshold and climatology from the training years, forecasts for
/// the test years.
inline TEHindcast te_hindcast(const DailySeries& t_np, const DailySeries& t_eg, const OnsetSeries& obs,
                              const SplitScheme& scheme, const TEConfig& cfg) {
  cfg.validate();
  const auto folds = make_folds(obs.years(), scheme);
  std::map<int, double> te_entries;
  std::map<int, double> clim_entries;
  TEHindcast out;
  for (const auto& fold : folds) {
    const auto train = obs.select(fold.train_years);
    const double threshold = te_threshold(t_eg, train);
    const double clim = train.mean();
    for (int year : fold.test_years) {
      TEYearOutcome outcome;
      outcome.year = year;
      outcome.threshold = threshold;
      outcome.climatology = clim;
      clim_entries.emplace(year, clim);
      try {
        TEConfig strict = cfg;
        strict.fallback = NoCrossingFallback::Error;
        outcome.te = te_forecast(t_np, threshold, year, strict);
        outcome.status = "ok";
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoCrossing) throw;
        if (cfg.fallback == NoCrossingFallback::Climatology) {
          outcome.te = clim;
          outcome.status = "fallback";
        } else {
          outcome.status = "no_crossing";
        }
      }
      if (outcome.te) te_entries.emplace(year, *outcome.te);
      out.years.push_back(outcome);
    }
  }
  std::sort(out.years.begin(), out.years.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
  out.te = ForecastSet("te", cfg.issue_doy, std::move(te_entries));
  out.climatology = ForecastSet("climatology", cfg.issue_doy, std::move(clim_entries));
  return out;
}

/// Screening + PCR hindcast. The method id records where screening happened
/// so leaky and clean runs stay distinguishable in reports.
inline CvResult imd_hindcast(const PredictorPanel& panel, const OnsetSeries& obs, const PCRConfig& cfg,
                             const ScreeningPlacement& screening_placement, const SplitScheme& scheme,
                             CvOptions options = {}) {
  options.method_id = "imd-pcr[" + describe(screening_placement) + "]";
  return pipeline_cv(panel, obs, scheme, screening_placement, cfg, options);
}

}  // namespace skillaudit
