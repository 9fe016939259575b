#pragma once

// Predictor screening by predictand correlation and principal component
// regression on the screened set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "skillaudit/error.hpp"
#include "skillaudit/skill.hpp"
#include "skillaudit/timeseries.hpp"

namespace skillaudit {

struct ScreeningConfig {
  int top_k = 9;
  double min_abs_r = 0.0;

  void validate() const {
    if (top_k < 1) fail(ErrorKind::Config, "screening top_k must be >= 1");
    if (!(min_abs_r >= 0.0 && min_abs_r < 1.0)) fail(ErrorKind::Config, "screening min_abs_r must lie in [0, 1)");
  }
};

struct FixedComponents {
  int k = 1;
};

struct VarianceFraction {
  double tau = 0.9;
};

using ComponentRule = std::variant<FixedComponents, VarianceFraction>;

struct PCRConfig {
  ScreeningConfig screening;
  ComponentRule n_components = VarianceFraction{0.9};

  void validate() const {
    screening.validate();
    if (const auto* fixed = std::get_if<FixedComponents>(&n_components)) {
      if (fixed->k < 1) fail(ErrorKind::Config, "fixed component count must be >= 1");
      if (fixed->k > screening.top_k) fail(ErrorKind::Config, "fixed component count exceeds screening top_k");
    } else {
      const double tau = std::get<VarianceFraction>(n_components).tau;
      if (!(tau > 0.0 && tau <= 1.0)) fail(ErrorKind::Config, "variance fraction must lie in (0, 1]");
    }
  }
};

struct ScreeningResult {
  std::vector<std::string> ids;  // descending |r|
  std::vector<double> abs_r;
  bool shortfall = false;  // fewer than top_k predictors passed min_abs_r
};

/// Ranks predictors by |r| with the onsets over `years`. Ties go to the
/// lexicographically smaller id. Predictors that are constant over `years`
/// have no defined correlation and are never selected.
inline ScreeningResult screen_predictors(const PredictorPanel& panel, const OnsetSeries& obs, std::span<const int> years,
                                         const ScreeningConfig& cfg) {
  cfg.validate();
  if (years.size() < 3) fail(ErrorKind::InsufficientSample, "screening needs >= 3 years");
  if (static_cast<std::size_t>(cfg.top_k) > panel.n_predictors()) {
    fail(ErrorKind::Config, "screening top_k exceeds the number of candidate predictors");
  }
  std::vector<double> y;
  y.reserve(years.size());
  for (int year : years) {
    auto v = obs.at(year);
    if (!v) fail(ErrorKind::Data, "no onset for screening year " + std::to_string(year));
    y.push_back(*v);
  }

  struct Candidate {
    double abs_r;
    const std::string* id;
  };
  std::vector<Candidate> candidates;
  for (std::size_t c = 0; c < panel.n_predictors(); ++c) {
    const auto x = panel.column(c, years);
    double r = 0.0;
    try {
      r = pearson(x, y);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInput) throw;
      continue;
    }
    if (std::fabs(r) >= cfg.min_abs_r) candidates.push_back({std::fabs(r), &panel.predictor_ids()[c]});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.abs_r != b.abs_r) return a.abs_r > b.abs_r;
    return *a.id < *b.id;
  });

  ScreeningResult out;
  const auto keep = std::min(candidates.size(), static_cast<std::size_t>(cfg.top_k));
  out.shortfall = keep < static_cast<std::size_t>(cfg.top_k);
  for (std::size_t i = 0; i < keep; ++i) {
    out.ids.push_back(*candidates[i].id);
    out.abs_r.push_back(candidates[i].abs_r);
  }
  return out;
}

/// Fitted principal component regression. Loadings are stored as columns
/// (predictor x component), each with its largest-magnitude entry positive.
struct PCRModel {
  std::vector<std::string> predictor_ids;
  std::vector<double> means;
  std::vector<double> sds;
  Eigen::MatrixXd loadings;
  std::vector<double> eigenvalues;  // retained, descending
  std::vector<double> coefficients;
  double intercept = 0.0;
  int n_train = 0;

  int n_components() const noexcept { return static_cast<int>(coefficients.size()); }
};

namespace detail {

// Sign convention: largest |entry| positive; ties resolved by lowest index.
inline void orient_component(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::fabs(v[i]) > std::fabs(v[best])) best = i;
  }
  if (v[best] < 0.0) v = -v;
}

inline int retained_components(const ComponentRule& rule, std::span<const double> eigenvalues) {
  const int p = static_cast<int>(eigenvalues.size());
  if (const auto* fixed = std::get_if<FixedComponents>(&rule)) return std::min(fixed->k, p);
  const double tau = std::get<VarianceFraction>(rule).tau;
  double total = 0.0;
  for (double ev : eigenvalues) total += std::max(ev, 0.0);
  if (total <= 0.0) fail(ErrorKind::DegenerateInput, "screened predictors carry no variance");
  double cum = 0.0;
  for (int k = 0; k < p; ++k) {
    cum += std::max(eigenvalues[static_cast<std::size_t>(k)], 0.0);
    if (cum >= tau * total * (1.0 - 1e-12)) return k + 1;
  }
  return p;
}

}  // namespace detail

/// Standardizes the selected predictors over the training years, diagonalizes
/// their covariance, keeps the leading components per cfg and regresses the
/// centered onsets on the component scores.
inline PCRModel pcr_fit(const PredictorPanel& panel, const OnsetSeries& obs, std::span<const int> train_years,
                        std::span<const std::string> selected, const PCRConfig& cfg) {
  cfg.validate();
  if (selected.empty()) fail(ErrorKind::Config, "no predictors selected for regression");
  const auto n = static_cast<Eigen::Index>(train_years.size());
  const auto p = static_cast<Eigen::Index>(selected.size());

  PCRModel model;
  model.predictor_ids.assign(selected.begin(), selected.end());
  model.n_train = static_cast<int>(n);

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int year = train_years[static_cast<std::size_t>(i)];
    auto v = obs.at(year);
    if (!v) fail(ErrorKind::Data, "no onset for training year " + std::to_string(year));
    y[i] = *v;
  }

  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    auto col = panel.column_of(selected[static_cast<std::size_t>(j)]);
    if (!col) fail(ErrorKind::Data, "panel lacks predictor " + selected[static_cast<std::size_t>(j)]);
    const auto x = panel.column(*col, train_years);
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = x[static_cast<std::size_t>(i)];
  }

  int k_min = 1;
  if (const auto* fixed = std::get_if<FixedComponents>(&cfg.n_components)) k_min = std::min<int>(fixed->k, static_cast<int>(p));
  if (n < k_min + 2) {
    fail(ErrorKind::InsufficientSample, "pcr needs at least components + 2 training years, got " + std::to_string(n));
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = z.col(j).mean();
    z.col(j).array() -= mean;
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      fail(ErrorKind::DegenerateInput, "predictor " + model.predictor_ids[static_cast<std::size_t>(j)] +
                                           " is constant over the training years");
    }
    z.col(j) /= sd;
    model.means.push_back(mean);
    model.sds.push_back(sd);
  }

  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "covariance eigendecomposition did not converge");

  // Eigen returns ascending eigenvalues; reverse to descending.
  std::vector<double> eigenvalues(static_cast<std::size_t>(p));
  Eigen::MatrixXd vectors(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    eigenvalues[static_cast<std::size_t>(j)] = solver.eigenvalues()[p - 1 - j];
    vectors.col(j) = solver.eigenvectors().col(p - 1 - j);
    detail::orient_component(vectors.col(j));
  }

  const int k = detail::retained_components(cfg.n_components, eigenvalues);
  if (n < k + 2) {
    fail(ErrorKind::InsufficientSample, "pcr needs at least components + 2 training years, got " + std::to_string(n));
  }
  model.loadings = vectors.leftCols(k);
  model.eigenvalues.assign(eigenvalues.begin(), eigenvalues.begin() + k);

  const Eigen::MatrixXd scores = z * model.loadings;
  const double y_mean = y.mean();
  const Eigen::VectorXd y_centered = y.array() - y_mean;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scores);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) fail(ErrorKind::DegenerateInput, "component score matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y_centered);

  model.coefficients.assign(beta.data(), beta.data() + beta.size());
  model.intercept = y_mean;
  return model;
}

inline double pcr_predict(const PCRModel& model, const PredictorPanel& panel, int year) {
  auto row = panel.row_of(year);
  if (!row) fail(ErrorKind::Data, "panel has no row for year " + std::to_string(year));
  const auto p = static_cast<Eigen::Index>(model.predictor_ids.size());
  Eigen::VectorXd z(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& id = model.predictor_ids[static_cast<std::size_t>(j)];
    auto col = panel.column_of(id);
    if (!col) fail(ErrorKind::Data, "panel lacks predictor " + id + " for year " + std::to_string(year));
    z[j] = (panel.value(*row, *col) - model.means[static_cast<std::size_t>(j)]) / model.sds[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd scores = model.loadings.transpose() * z;
  double out = model.intercept;
  for (Eigen::Index c = 0; c < scores.size(); ++c) out += model.coefficients[static_cast<std::size_t>(c)] * scores[c];
  return out;
}

}  // namespace skillaudit
