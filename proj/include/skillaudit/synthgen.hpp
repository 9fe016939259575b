#pragma once

// Seeded synthetic fixtures. Every generator is a pure function of its
// parameters and seed; see rng.hpp for the stream construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/rng.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

struct Ar1Params {
  double mean = 0.0;
  double phi = 0.0;
  double sigma = 1.0;  // innovation sd
  int n = 1;
  std::uint64_t seed = 0;
};

inline std::vector<double> gen_ar1(const Ar1Params& params) {
  if (!(std::fabs(params.phi) < 1.0)) fail(ErrorKind::Stationarity, "AR(1) needs |phi| < 1");
  if (!(params.sigma >= 0.0)) fail(ErrorKind::Config, "AR(1) innovation sd must be >= 0");
  if (params.n < 1) fail(ErrorKind::Config, "AR(1) length must be >= 1");
  RandomStream rng(params.seed, 0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(params.n));
  const double stationary_sd = params.sigma / std::sqrt(1.0 - params.phi * params.phi);
  double x = params.mean + stationary_sd * rng.normal();
  out.push_back(x);
  for (int t = 1; t < params.n; ++t) {
    x = params.mean + params.phi * (x - params.mean) + params.sigma * rng.normal();
    out.push_back(x);
  }
  return out;
}

/// AR(1) onsets on consecutive years. `sd` is the marginal (stationary) sd;
/// values are clamped into [1, 366].
inline OnsetSeries gen_onset_series(int start_year, int n_years, double mean_doy, double sd, double phi,
                                    std::uint64_t seed) {
  if (n_years < 1) fail(ErrorKind::Config, "onset series needs >= 1 year");
  if (!(sd >= 0.0)) fail(ErrorKind::Config, "onset sd must be >= 0");
  if (!(std::fabs(phi) < 1.0)) fail(ErrorKind::Stationarity, "AR(1) needs |phi| < 1");
  Ar1Params params{mean_doy, phi, sd * std::sqrt(1.0 - phi * phi), n_years, seed};
  auto values = gen_ar1(params);
  std::vector<int> years;
  for (int i = 0; i < n_years; ++i) {
    years.push_back(start_year + i);
    values[static_cast<std::size_t>(i)] = std::clamp(values[static_cast<std::size_t>(i)], kMinOnsetDoy, kMaxOnsetDoy);
  }
  return OnsetSeries(std::move(years), std::move(values));
}

inline std::string signal_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "sig%02d", index);
  return buf;
}

inline std::string noise_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "nz%03d", index);
  return buf;
}

/// Panel with n_signal columns planted at population correlation signal_r with
/// the onsets, followed by n_noise independent standard normal columns.
/// Column j (0-based, signal first) draws from stream j + 1 of the seed.
inline PredictorPanel gen_panel(const OnsetSeries& onset, int n_signal, double signal_r, int n_noise,
                                std::uint64_t seed) {
  if (onset.empty()) fail(ErrorKind::Config, "panel generation needs a nonempty onset series");
  if (n_signal < 0 || n_noise < 0) fail(ErrorKind::Config, "predictor counts must be >= 0");
  if (n_signal > 0 && !(std::fabs(signal_r) < 1.0)) fail(ErrorKind::Config, "signal_r must lie in (-1, 1)");
  const auto n = onset.size();
  const auto cols = static_cast<std::size_t>(n_signal + n_noise);

  std::vector<double> z(n, 0.0);
  if (n >= 2) {
    double mean = 0.0;
    for (double v : onset.onset()) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : onset.onset()) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd > 0.0) {
      for (std::size_t i = 0; i < n; ++i) z[i] = (onset.onset()[i] - mean) / sd;
    }
  }

  std::vector<std::string> ids;
  for (int j = 0; j < n_signal; ++j) ids.push_back(signal_id(j + 1));
  for (int j = 0; j < n_noise; ++j) ids.push_back(noise_id(j + 1));

  std::vector<double> values(n * cols);
  const double noise_weight = std::sqrt(1.0 - signal_r * signal_r);
  for (std::size_t c = 0; c < cols; ++c) {
    RandomStream rng(seed, c + 1);
    const bool is_signal = c < static_cast<std::size_t>(n_signal);
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = rng.normal();
      values[i * cols + c] = is_signal ? signal_r * z[i] + noise_weight * eta : eta;
    }
  }
  return PredictorPanel(onset.years(), std::move(ids), std::move(values));
}

/// Daily linear ramps for trend-threshold tests. The noise-free ramp crosses
/// the threshold at onset - 0.5, so the first whole day strictly above the
/// threshold is the (integer) onset itself. Records cover days
/// [max(1, floor(onset) - lead_days), 365]. Year y draws noise from stream y.
inline DailySeries gen_te_daily(std::span<const int> years, const OnsetSeries& onset, double threshold, double slope,
                                int lead_days, double noise_sd, std::uint64_t seed,
                                const std::string& region_id = "NP") {
  if (!(slope > 0.0)) fail(ErrorKind::Config, "ramp slope must be positive");
  if (lead_days < 0) fail(ErrorKind::Config, "lead_days must be >= 0");
  if (!(noise_sd >= 0.0)) fail(ErrorKind::Config, "noise sd must be >= 0");
  std::map<int, DailySeries::YearRecord> records;
  for (int year : years) {
    auto od = onset.at(year);
    if (!od) fail(ErrorKind::Data, "no onset for year " + std::to_string(year));
    const double crossing = *od - 0.5;
    const int first = std::max(1, static_cast<int>(std::floor(*od)) - lead_days);
    RandomStream rng(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(year)));
    DailySeries::YearRecord rec{first, {}};
    for (int d = first; d <= kDaysInYear; ++d) {
      double v = threshold + slope * (d - crossing);
      if (noise_sd > 0.0) v += noise_sd * rng.normal();
      rec.values.push_back(v);
    }
    records.emplace(year, std::move(rec));
  }
  return DailySeries(region_id, std::move(records));
}

/// Flat daily series (every day of every year equal to `level`), the T_EG
/// companion for planted ramps: its climatological threshold is `level`.
inline DailySeries gen_flat_daily(std::span<const int> years, double level, const std::string& region_id = "EG") {
  std::map<int, DailySeries::YearRecord> records;
  for (int year : years) records.emplace(year, DailySeries::YearRecord{1, std::vector<double>(kDaysInYear, level)});
  return DailySeries(region_id, std::move(records));
}

}  // namespace skillaudit
