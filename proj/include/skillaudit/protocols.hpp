#pragma once

// Verification protocols: fold construction, overlap diagnostics, and a
// cross-validation driver that re-runs the whole model-definition pipeline
// (screening + regression) inside every fold unless told otherwise.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/pcr.hpp"
#include "skillaudit/skill.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

struct LeaveOneOut {
  friend bool operator==(const LeaveOneOut&, const LeaveOneOut&) = default;
};

struct SlidingWindow {
  int train_len = 22;
  friend bool operator==(const SlidingWindow&, const SlidingWindow&) = default;
};

struct FixedSplit {
  PeriodSpec calibration;
  PeriodSpec validation;
  friend bool operator==(const FixedSplit&, const FixedSplit&) = default;
};

using SplitScheme = std::variant<LeaveOneOut, SlidingWindow, FixedSplit>;

struct Fold {
  std::vector<int> train_years;
  std::vector<int> test_years;
};

/// Screening inside each fold's training years, or once over a fixed period
/// regardless of which years are being verified.
struct InFold {
  friend bool operator==(const InFold&, const InFold&) = default;
};

struct FixedPeriodScreening {
  PeriodSpec period;
  friend bool operator==(const FixedPeriodScreening&, const FixedPeriodScreening&) = default;
};

using ScreeningPlacement = std::variant<InFold, FixedPeriodScreening>;

inline std::string describe(const SplitScheme& scheme) {
  if (std::holds_alternative<LeaveOneOut>(scheme)) return "loo";
  if (const auto* sw = std::get_if<SlidingWindow>(&scheme)) return "sliding:" + std::to_string(sw->train_len);
  const auto& fs = std::get<FixedSplit>(scheme);
  return "split:" + std::to_string(fs.calibration.start_year) + ":" + std::to_string(fs.calibration.end_year) + "," +
         std::to_string(fs.validation.start_year) + ":" + std::to_string(fs.validation.end_year);
}

inline std::string describe(const ScreeningPlacement& placement) {
  if (std::holds_alternative<InFold>(placement)) return "infold";
  const auto& p = std::get<FixedPeriodScreening>(placement).period;
  return "fixed:" + std::to_string(p.start_year) + ":" + std::to_string(p.end_year);
}

/// Share of verification years that fall inside the model-definition period.
inline double overlap_fraction(const PeriodSpec& model_def_period, std::span<const int> verification_years) {
  if (verification_years.empty()) fail(ErrorKind::InsufficientSample, "overlap needs a nonempty verification set");
  const auto inside = std::count_if(verification_years.begin(), verification_years.end(),
                                    [&](int y) { return model_def_period.contains(y); });
  return static_cast<double>(inside) / static_cast<double>(verification_years.size());
}

inline std::size_t overlap_count(const PeriodSpec& model_def_period, std::span<const int> verification_years) {
  return static_cast<std::size_t>(std::count_if(verification_years.begin(), verification_years.end(),
                                                [&](int y) { return model_def_period.contains(y); }));
}

inline std::vector<Fold> make_folds(std::span<const int> years, const SplitScheme& scheme) {
  if (!detail::strictly_increasing(years)) fail(ErrorKind::Data, "fold years must be strictly increasing");
  std::vector<Fold> folds;

  if (std::holds_alternative<LeaveOneOut>(scheme)) {
    if (years.size() < 2) fail(ErrorKind::SchemeInfeasible, "leave-one-out needs at least 2 years");
    for (std::size_t i = 0; i < years.size(); ++i) {
      Fold f;
      for (std::size_t j = 0; j < years.size(); ++j) {
        if (j != i) f.train_years.push_back(years[j]);
      }
      f.test_years.push_back(years[i]);
      folds.push_back(std::move(f));
    }
    return folds;
  }

  if (const auto* sw = std::get_if<SlidingWindow>(&scheme)) {
    const int len = sw->train_len;
    if (len < 3) fail(ErrorKind::Config, "sliding window length must be >= 3");
    for (std::size_t i = static_cast<std::size_t>(len); i < years.size(); ++i) {
      // The len immediately preceding calendar years must all be present.
      if (years[i - static_cast<std::size_t>(len)] != years[i] - len) continue;
      Fold f;
      f.train_years.assign(years.begin() + static_cast<std::ptrdiff_t>(i) - len, years.begin() + static_cast<std::ptrdiff_t>(i));
      f.test_years.push_back(years[i]);
      folds.push_back(std::move(f));
    }
    if (folds.empty()) {
      fail(ErrorKind::SchemeInfeasible, "no year has " + std::to_string(len) + " consecutive predecessors");
    }
    return folds;
  }

  const auto& split = std::get<FixedSplit>(scheme);
  if (split.calibration.start_year <= split.validation.end_year &&
      split.validation.start_year <= split.calibration.end_year) {
    fail(ErrorKind::Config, "calibration and validation periods overlap");
  }
  Fold f;
  for (int y : years) {
    if (split.calibration.contains(y)) f.train_years.push_back(y);
    if (split.validation.contains(y)) f.test_years.push_back(y);
  }
  if (f.train_years.empty()) fail(ErrorKind::SchemeInfeasible, "calibration period holds no available year");
  if (f.test_years.empty()) fail(ErrorKind::SchemeInfeasible, "validation period holds no available year");
  folds.push_back(std::move(f));
  return folds;
}

/// Years whose data defined the model in one fold. Reported so callers can
/// audit that no test year leaked into screening or fitting.
struct FoldAudit {
  Fold fold;
  std::vector<int> screening_years;
  std::vector<int> fitting_years;
  std::vector<std::string> selected;
};

struct CvOptions {
  double tolerance_days = 7.0;
  int issue_doy = 0;
  std::string method_id = "pcr";
  unsigned workers = 1;
  // Called once per fold, in fold order, on the calling thread.
  std::function<void(const FoldAudit&)> on_fold;
};

struct CvResult {
  ForecastSet forecasts;
  SkillReport report;
  double overlap = 0.0;
  std::vector<FoldAudit> folds;
};

namespace detail {

// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto n_threads = std::min<std::size_t>(workers, count);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(body);
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::vector<int> shared_years(const PredictorPanel& panel, const OnsetSeries& obs) {
  std::vector<int> out;
  std::set_intersection(panel.years().begin(), panel.years().end(), obs.years().begin(), obs.years().end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Cross-validated hindcast of the screening + PCR pipeline. Every fold sees
/// only its training slice of the onsets; with FixedPeriod placement the
/// screening is done once over the fixed period instead, which is exactly the
/// leak being audited.
inline CvResult pipeline_cv(const PredictorPanel& panel, const OnsetSeries& obs, const SplitScheme& scheme,
                            const ScreeningPlacement& screening, const PCRConfig& model_cfg, const CvOptions& options = {}) {
  model_cfg.validate();
  const auto years = detail::shared_years(panel, obs);
  const auto folds = make_folds(years, scheme);

  std::optional<ScreeningResult> fixed_selection;
  std::vector<int> fixed_screening_years;
  if (const auto* fixed = std::get_if<FixedPeriodScreening>(&screening)) {
    for (int y : years) {
      if (fixed->period.contains(y)) fixed_screening_years.push_back(y);
    }
    if (fixed_screening_years.size() < 3) {
      fail(ErrorKind::SchemeInfeasible, "fixed screening period holds fewer than 3 available years");
    }
    fixed_selection = screen_predictors(panel, restrict(obs, fixed->period), fixed_screening_years, model_cfg.screening);
  }

  std::vector<FoldAudit> audits(folds.size());
  std::vector<std::vector<std::pair<int, double>>> predictions(folds.size());

  detail::parallel_for(folds.size(), options.workers, [&](std::size_t i) {
    const auto& fold = folds[i];
    if (fold.train_years.size() < 3) {
      fail(ErrorKind::SchemeInfeasible, "fold has fewer than 3 training years");
    }
    // The model-definition steps only ever see this training slice.
    const OnsetSeries train_obs = obs.select(fold.train_years);
    const PredictorPanel train_panel = panel.select_years(fold.train_years);

    FoldAudit audit;
    audit.fold = fold;
    audit.fitting_years = fold.train_years;
    ScreeningResult selection;
    if (fixed_selection) {
      selection = *fixed_selection;
      audit.screening_years = fixed_screening_years;
    } else {
      selection = screen_predictors(train_panel, train_obs, fold.train_years, model_cfg.screening);
      audit.screening_years = fold.train_years;
    }
    if (selection.ids.empty()) fail(ErrorKind::DegenerateInput, "screening selected no predictor");
    audit.selected = selection.ids;

    const auto model = pcr_fit(train_panel, train_obs, fold.train_years, selection.ids, model_cfg);
    for (int year : fold.test_years) predictions[i].emplace_back(year, pcr_predict(model, panel, year));
    audits[i] = std::move(audit);
  });

  std::map<int, double> entries;
  std::vector<int> test_years;
  for (const auto& fold_preds : predictions) {
    for (const auto& [year, value] : fold_preds) {
      if (!entries.emplace(year, value).second) fail(ErrorKind::Config, "year tested by more than one fold");
      test_years.push_back(year);
    }
  }
  std::sort(test_years.begin(), test_years.end());

  CvResult result;
  result.forecasts = ForecastSet(options.method_id, options.issue_doy, std::move(entries));
  result.report = skill_report(result.forecasts, obs, options.tolerance_days);
  if (const auto* fixed = std::get_if<FixedPeriodScreening>(&screening)) {
    result.overlap = overlap_fraction(fixed->period, test_years);
  }
  result.folds = std::move(audits);
  if (options.on_fold) {
    for (const auto& audit : result.folds) options.on_fold(audit);
  }
  return result;
}

}  // namespace skillaudit
