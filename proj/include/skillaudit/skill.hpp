#pragma once

// Skill measures for one forecast/observation pairing: Pearson correlation,
// its no-skill p-value, and the tolerance-window success rate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/student_t.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

enum class Sided { One, Two };

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::Dimension, "pearson: sequences differ in length");
  if (x.size() < 2) fail(ErrorKind::InsufficientSample, "pearson: need at least 2 pairs");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorKind::DegenerateInput, "pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// Probability of a sample correlation at least as large as r under zero true
/// correlation, via t = r sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of
/// freedom. One-sided tests rho > 0; two-sided doubles the tail at |t|.
inline double no_skill_p_value(double r, int n, Sided sided = Sided::One) {
  if (n < 3) fail(ErrorKind::InsufficientSample, "p-value needs n >= 3, got " + std::to_string(n));
  if (!(std::fabs(r) <= 1.0)) fail(ErrorKind::Domain, "correlation outside [-1, 1]");
  if (std::fabs(r) == 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  if (sided == Sided::One) return student_t_upper_tail(t, df);
  return 2.0 * student_t_upper_tail(std::fabs(t), df);
}

/// Verification pairs restricted to the years both sides share.
struct CommonYears {
  std::vector<int> years;
  std::vector<double> predicted;
  std::vector<double> observed;
};

inline CommonYears common_years(const ForecastSet& forecasts, const OnsetSeries& obs) {
  CommonYears out;
  for (const auto& [year, pred] : forecasts.entries()) {
    if (auto o = obs.at(year)) {
      out.years.push_back(year);
      out.predicted.push_back(pred);
      out.observed.push_back(*o);
    }
  }
  return out;
}

/// Fraction of common years with |predicted - observed| <= tolerance_days.
inline double success_rate(const ForecastSet& forecasts, const OnsetSeries& obs, double tolerance_days) {
  if (!(tolerance_days >= 0.0)) fail(ErrorKind::Domain, "tolerance must be nonnegative");
  const auto common = common_years(forecasts, obs);
  if (common.years.empty()) fail(ErrorKind::NoOverlap, "forecasts and observations share no year");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < common.years.size(); ++i) {
    if (std::fabs(common.predicted[i] - common.observed[i]) <= tolerance_days) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(common.years.size());
}

/// One verification row. pearson_r and the p-values are empty when the
/// correlation is undefined (a constant forecast or observation series).
struct SkillReport {
  std::string method_id;
  int n = 0;
  std::optional<double> pearson_r;
  std::optional<double> p_no_skill;
  std::optional<double> p_two_sided;
  double success_rate = 0.0;
  double tolerance_days = 0.0;
};

inline SkillReport skill_report(const ForecastSet& forecasts, const OnsetSeries& obs, double tolerance_days) {
  const auto common = common_years(forecasts, obs);
  if (common.years.empty()) fail(ErrorKind::NoOverlap, "forecasts and observations share no year");
  if (common.years.size() < 3) {
    fail(ErrorKind::InsufficientSample, "skill report needs >= 3 common years, got " + std::to_string(common.years.size()));
  }
  SkillReport report;
  report.method_id = forecasts.method_id();
  report.n = static_cast<int>(common.years.size());
  report.tolerance_days = tolerance_days;
  report.success_rate = success_rate(forecasts, obs, tolerance_days);
  try {
    const double r = pearson(common.predicted, common.observed);
    report.pearson_r = r;
    report.p_no_skill = no_skill_p_value(r, report.n, Sided::One);
    report.p_two_sided = no_skill_p_value(r, report.n, Sided::Two);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateInput) throw;
  }
  return report;
}

}  // namespace skillaudit
