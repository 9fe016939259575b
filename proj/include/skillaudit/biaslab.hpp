#pragma once

// Monte Carlo laboratory for model-selection bias.
//
// run_bias_experiment: a true skill curve S(p) is observed through noise,
// the parameter maximizing the noisy curve is picked, and the skill claimed
// at that pick is compared with the best true skill and with an independent
// second sample at the same pick.
//
// screening_noise_experiment: pure-noise predictors, top-1 screening and a
// leave-one-out regression hindcast, with screening either inside each fold
// or once over all years.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skillaudit/error.hpp"
#include "skillaudit/protocols.hpp"
#include "skillaudit/rng.hpp"
#include "skillaudit/skill.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

/// S(p) = s_max - curvature * (p - p_opt)^2 sampled on a grid.
struct SkillCurve {
  double s_max = 0.8;
  double curvature = 1.0;
  double p_opt = 0.5;
  std::vector<double> grid;

  void validate() const {
    if (grid.size() < 5) fail(ErrorKind::Config, "skill curve grid needs at least 5 points");
    if (!grid_increasing()) fail(ErrorKind::Config, "skill curve grid must be strictly increasing");
    if (!(curvature > 0.0)) fail(ErrorKind::Config, "skill curve curvature must be positive");
    if (!(p_opt >= grid.front() && p_opt <= grid.back())) fail(ErrorKind::Config, "p_opt outside the grid range");
  }

 private:
  bool grid_increasing() const {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) return false;
    }
    return true;
  }
};

/// n evenly spaced points from lo to hi inclusive, computed as
/// lo + (hi - lo) * i / (n - 1) so symmetric grids hit their midpoint exactly.
inline std::vector<double> linspace_grid(double lo, double hi, int n) {
  if (n < 2) fail(ErrorKind::Config, "grid needs at least 2 points");
  if (!(hi > lo)) fail(ErrorKind::Config, "grid upper bound must exceed lower bound");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.back() = hi;
  return out;
}

inline double skill_curve_eval(const SkillCurve& curve, double p) {
  if (curve.grid.empty() || !(p >= curve.grid.front() && p <= curve.grid.back())) {
    fail(ErrorKind::Domain, "p outside the skill curve grid range");
  }
  const double d = p - curve.p_opt;
  return curve.s_max - curve.curvature * d * d;
}

struct BiasLabConfig {
  SkillCurve curve;
  double noise_sd = 0.1;
  int n_trials = 10000;
  std::uint64_t seed = 42;

  void validate() const {
    curve.validate();
    if (!(noise_sd >= 0.0)) fail(ErrorKind::Config, "noise sd must be >= 0");
    if (n_trials < 1) fail(ErrorKind::Config, "n_trials must be >= 1");
  }
};

struct BiasLabResult {
  double mean_p_hat = 0.0;
  double se_p_hat = 0.0;
  double mean_S_hat_at_p_hat = 0.0;
  double se_S_hat = 0.0;
  double mean_S2_at_p_hat = 0.0;
  double se_S2 = 0.0;
  double S_at_p_opt = 0.0;
  double bias = 0.0;
  int n_trials = 0;
};

/// Both noisy samples of one trial plus the selected grid index.
struct BiasSample {
  std::vector<double> s_hat;   // sample used for selection (obs 1)
  std::vector<double> s_hat2;  // independent sample (obs 2)
  std::size_t argmax = 0;      // lowest index among ties
};

/// Trial t draws from stream t of the seed: first the selection-sample noise
/// for every grid point in order, then the independent sample's noise.
inline BiasSample draw_bias_sample(const BiasLabConfig& cfg, std::uint64_t trial) {
  RandomStream rng(cfg.seed, trial);
  const auto& grid = cfg.curve.grid;
  BiasSample s;
  s.s_hat.reserve(grid.size());
  s.s_hat2.reserve(grid.size());
  for (double p : grid) s.s_hat.push_back(skill_curve_eval(cfg.curve, p) + cfg.noise_sd * rng.normal());
  for (double p : grid) s.s_hat2.push_back(skill_curve_eval(cfg.curve, p) + cfg.noise_sd * rng.normal());
  for (std::size_t i = 1; i < s.s_hat.size(); ++i) {
    if (s.s_hat[i] > s.s_hat[s.argmax]) s.argmax = i;
  }
  return s;
}

namespace detail {

// Mean and standard error, summed in index order with Neumaier compensation.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  const auto n = static_cast<double>(xs.size());
  out.mean = compensated_sum(xs) / n;
  if (xs.size() < 2) return out;
  std::vector<double> sq;
  sq.reserve(xs.size());
  for (double x : xs) sq.push_back((x - out.mean) * (x - out.mean));
  out.se = std::sqrt(compensated_sum(sq) / (n - 1.0) / n);
  return out;
}

}  // namespace detail

inline BiasLabResult run_bias_experiment(const BiasLabConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_trials);
  std::vector<double> p_hat(n), s_hat(n), s_hat2(n);
  detail::parallel_for(n, workers, [&](std::size_t t) {
    const auto sample = draw_bias_sample(cfg, t);
    p_hat[t] = cfg.curve.grid[sample.argmax];
    s_hat[t] = sample.s_hat[sample.argmax];
    s_hat2[t] = sample.s_hat2[sample.argmax];
  });
  BiasLabResult out;
  const auto p = detail::mean_se(p_hat);
  const auto s1 = detail::mean_se(s_hat);
  const auto s2 = detail::mean_se(s_hat2);
  out.mean_p_hat = p.mean;
  out.se_p_hat = p.se;
  out.mean_S_hat_at_p_hat = s1.mean;
  out.se_S_hat = s1.se;
  out.mean_S2_at_p_hat = s2.mean;
  out.se_S2 = s2.se;
  out.S_at_p_opt = skill_curve_eval(cfg.curve, cfg.curve.p_opt);
  out.bias = out.mean_S_hat_at_p_hat - out.S_at_p_opt;
  out.n_trials = cfg.n_trials;
  return out;
}

enum class PlacementMode { InFold, FullPeriod };

inline std::string to_string(PlacementMode mode) { return mode == PlacementMode::InFold ? "infold" : "full-period"; }

struct ApparentSkill {
  double mean_apparent_r = 0.0;
  double se = 0.0;
  int n_trials = 0;
};

/// One null trial: onsets and predictors are independent standard normals
/// (onsets shifted to 152 + 8 z so they are valid days of year), drawn from
/// stream `trial` in that order, predictors column by column.
inline double screening_noise_trial(int n_years, int n_predictors, std::uint64_t seed, std::uint64_t trial,
                                    PlacementMode placement) {
  RandomStream rng(seed, trial);
  std::vector<int> years;
  std::vector<double> onset;
  for (int i = 0; i < n_years; ++i) {
    years.push_back(i + 1);
    onset.push_back(152.0 + 8.0 * rng.normal());
  }
  std::vector<std::string> ids;
  for (int j = 0; j < n_predictors; ++j) ids.push_back("x" + std::to_string(j + 1));
  std::vector<double> values(static_cast<std::size_t>(n_years * n_predictors));
  for (int j = 0; j < n_predictors; ++j) {
    for (int i = 0; i < n_years; ++i) values[static_cast<std::size_t>(i * n_predictors + j)] = rng.normal();
  }
  const OnsetSeries obs(years, onset);
  const PredictorPanel panel(years, std::move(ids), std::move(values));

  PCRConfig cfg;
  cfg.screening = ScreeningConfig{1, 0.0};
  cfg.n_components = FixedComponents{1};
  ScreeningPlacement where = InFold{};
  if (placement == PlacementMode::FullPeriod) where = FixedPeriodScreening{PeriodSpec(1, n_years)};
  const auto cv = pipeline_cv(panel, obs, LeaveOneOut{}, where, cfg);

  std::vector<double> pred, truth;
  for (const auto& [year, value] : cv.forecasts.entries()) {
    pred.push_back(value);
    truth.push_back(*obs.at(year));
  }
  return pearson(pred, truth);
}

inline ApparentSkill screening_noise_experiment(int n_years, int n_predictors, int n_trials, std::uint64_t seed,
                                                PlacementMode placement, unsigned workers = 1) {
  if (n_years < 10) fail(ErrorKind::Config, "screening experiment needs n_years >= 10");
  if (n_predictors < 1) fail(ErrorKind::Config, "screening experiment needs n_predictors >= 1");
  if (n_trials < 1) fail(ErrorKind::Config, "n_trials must be >= 1");
  std::vector<double> r(static_cast<std::size_t>(n_trials));
  detail::parallel_for(r.size(), workers, [&](std::size_t t) {
    r[t] = screening_noise_trial(n_years, n_predictors, seed, t, placement);
  });
  const auto ms = detail::mean_se(r);
  return ApparentSkill{ms.mean, ms.se, n_trials};
}

}  // namespace skillaudit
