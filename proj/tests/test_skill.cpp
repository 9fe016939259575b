#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "skillaudit/rng.hpp"
#include "skillaudit/skill.hpp"

using namespace skillaudit;
using Catch::Approx;

namespace {

ForecastSet forecast_of(const std::vector<int>& years, const std::vector<double>& values) {
  std::map<int, double> e;
  for (std::size_t i = 0; i < years.size(); ++i) e[years[i]] = values[i];
  return ForecastSet("test", 125, e);
}

// Independent oracle: Boost's Student-t survival function.
double boost_one_sided(double r, int n) {
  const double df = n - 2;
  const double t = r * std::sqrt(df / (1 - r * r));
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace

TEST_CASE("pearson examples", "[pearson]") {
  const std::vector<double> x{1, 2, 3, 4};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(pearson(x, x) == Approx(1.0).margin(1e-15));
  CHECK(pearson(x, neg) == Approx(-1.0).margin(1e-15));
  // Hand computation: Sxy = 6.5, Sxx = 5, Syy = 8.75.
  CHECK(pearson(x, std::vector<double>{1, 2, 3, 5}) == Approx(6.5 / std::sqrt(43.75)).margin(1e-15));
  CHECK(pearson(x, std::vector<double>{1, 2, 3, 5}) == Approx(0.9827).margin(1e-4));
}

TEST_CASE("pearson error paths", "[pearson]") {
  const std::vector<double> x{1, 2, 3};
  try {
    pearson(x, std::vector<double>{1, 2});
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
  }
  try {
    pearson(x, std::vector<double>{4, 4, 4});
    FAIL("expected a degenerate-input error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateInput);
  }
}

TEST_CASE("pearson is affine invariant", "[pearson][property]") {
  RandomStream rng(11, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x, y, xa, ya;
    const int n = 3 + trial % 20;
    for (int i = 0; i < n; ++i) {
      x.push_back(rng.normal());
      y.push_back(rng.normal() + 0.3 * x.back());
    }
    const double slope = 0.1 + 5 * rng.uniform();
    const double shift = 100 * (rng.uniform() - 0.5);
    for (int i = 0; i < n; ++i) {
      xa.push_back(slope * x[i] + shift);
      ya.push_back(-slope * y[i] + shift);
    }
    const double r = pearson(x, y);
    CHECK(pearson(xa, y) == Approx(r).margin(1e-12));
    CHECK(pearson(x, ya) == Approx(-r).margin(1e-12));
    CHECK(std::fabs(r) <= 1.0);
  }
}

TEST_CASE("no-skill p-values for reference correlations", "[pvalue]") {
  CHECK(no_skill_p_value(0.78, 11) == Approx(0.0023).margin(0.0002));
  CHECK(no_skill_p_value(0.70, 17) == Approx(0.0009).margin(0.0002));
  CHECK(no_skill_p_value(0.64, 11) == Approx(0.017).margin(0.001));
  CHECK(no_skill_p_value(0.24, 43) == Approx(0.062).margin(0.002));
  for (int n : {3, 4, 11, 50, 200}) CHECK(no_skill_p_value(0.0, n) == 0.5);
}

TEST_CASE("no-skill p-value edge cases", "[pvalue]") {
  CHECK(no_skill_p_value(1.0, 11) == 0.0);
  CHECK(no_skill_p_value(-1.0, 11) == 0.0);
  CHECK(no_skill_p_value(1.0, 11, Sided::Two) == 0.0);
  try {
    no_skill_p_value(0.5, 2);
    FAIL("expected insufficient-sample error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientSample);
  }
  CHECK_THROWS_AS(no_skill_p_value(1.5, 10), Error);
  CHECK(no_skill_p_value(-0.5, 20) == Approx(1.0 - no_skill_p_value(0.5, 20)).margin(1e-14));
}

TEST_CASE("Student-t tail matches the Cauchy closed form at one degree of freedom", "[pvalue][oracle]") {
  for (double r : {-0.99, -0.7, -0.3, -0.01, 0.0, 0.05, 0.2, 0.5, 0.8, 0.95, 0.999}) {
    const double t = r * std::sqrt(1.0 / (1 - r * r));
    const double cauchy = 0.5 - std::atan(t) / std::numbers::pi;
    CHECK(no_skill_p_value(r, 3) == Approx(cauchy).margin(1e-10));
  }
}

TEST_CASE("Student-t tail agrees with Boost across df <= 200", "[pvalue][oracle]") {
  for (int n : {3, 4, 5, 8, 11, 17, 30, 43, 51, 100, 202}) {
    for (double r = -0.95; r < 0.96; r += 0.05) {
      CHECK(no_skill_p_value(r, n) == Approx(boost_one_sided(r, n)).margin(1e-10));
    }
  }
  CHECK(student_t_upper_tail(2.5, 7.5) ==
        Approx(boost::math::cdf(boost::math::complement(boost::math::students_t(7.5), 2.5))).margin(1e-12));
}

TEST_CASE("two-sided p is exactly twice the one-sided p for positive r", "[pvalue][property]") {
  for (int n : {3, 5, 11, 43, 100}) {
    for (double r = 0.01; r < 1.0; r += 0.07) {
      CHECK(no_skill_p_value(r, n, Sided::Two) == 2.0 * no_skill_p_value(r, n, Sided::One));
    }
  }
}

TEST_CASE("p-value decreases strictly in r and in n", "[pvalue][property]") {
  for (int n : {4, 11, 43}) {
    double prev = no_skill_p_value(0.001, n);
    for (double r = 0.02; r < 0.99; r += 0.02) {
      const double p = no_skill_p_value(r, n);
      CHECK(p < prev);
      prev = p;
    }
  }
  for (double r : {0.1, 0.3, 0.78}) {
    double prev = no_skill_p_value(r, 3);
    for (int n = 4; n <= 120; ++n) {
      const double p = no_skill_p_value(r, n);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("success rate examples", "[success]") {
  const std::vector<int> years{2001, 2002, 2003, 2004, 2005, 2006, 2007, 2008, 2009, 2010, 2011};
  const std::vector<double> obs_v{150, 152, 148, 160, 155, 151, 149, 157, 153, 146, 158};
  const OnsetSeries obs(years, obs_v);
  CHECK(success_rate(forecast_of(years, obs_v), obs, 0.0) == 1.0);

  std::vector<double> off7;
  for (std::size_t i = 0; i < obs_v.size(); ++i) off7.push_back(obs_v[i] + (i % 2 ? 7.0 : -7.0));
  CHECK(success_rate(forecast_of(years, off7), obs, 7.0) == 1.0);

  // Exactly 8 of 11 within tolerance: errors 0..7 for eight years, 8, 10, 20 for three.
  const std::vector<double> errors{0, 1, -2, 3, -4, 5, -6, 7, 8, -10, 20};
  std::vector<double> pattern;
  for (std::size_t i = 0; i < obs_v.size(); ++i) pattern.push_back(obs_v[i] + errors[i]);
  CHECK(success_rate(forecast_of(years, pattern), obs, 7.0) == Approx(8.0 / 11.0));
  CHECK(success_rate(forecast_of(years, pattern), obs, 7.0) == Approx(0.727).margin(5e-4));
}

TEST_CASE("success rate counts only common years", "[success]") {
  const OnsetSeries obs({2000, 2001, 2002}, {150, 160, 170});
  const auto f = forecast_of({2001, 2002, 2003}, {160, 100, 200});
  CHECK(success_rate(f, obs, 1.0) == 0.5);
  try {
    success_rate(forecast_of({1990}, {150}), obs, 7.0);
    FAIL("expected no-overlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoOverlap);
  }
}

TEST_CASE("success rate never decreases as tolerance widens", "[success][property]") {
  RandomStream rng(2024, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 40);
    std::vector<int> years;
    std::vector<double> o, f;
    for (int i = 0; i < n; ++i) {
      years.push_back(1950 + i);
      o.push_back(std::clamp(152 + 10 * rng.normal(), 1.0, 366.0));
      f.push_back(std::clamp(152 + 10 * rng.normal(), 1.0, 366.0));
    }
    const OnsetSeries obs(years, o);
    const auto fc = forecast_of(years, f);
    double prev = -1.0;
    for (double tol = 0.0; tol <= 40.0; tol += 0.5) {
      const double s = success_rate(fc, obs, tol);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("skill report assembles a consistent row", "[report]") {
  const std::vector<int> years{2001, 2002, 2003, 2004, 2005};
  const std::vector<double> obs_v{150, 152, 148, 160, 155};
  const OnsetSeries obs(years, obs_v);

  const auto perfect = skill_report(forecast_of(years, obs_v), obs, 7.0);
  CHECK(perfect.n == 5);
  CHECK(*perfect.pearson_r == 1.0);
  CHECK(*perfect.p_no_skill == 0.0);
  CHECK(perfect.success_rate == 1.0);

  const auto clim = skill_report(forecast_of(years, {153, 153, 153, 153, 153}), obs, 6.0);
  CHECK_FALSE(clim.pearson_r.has_value());
  CHECK_FALSE(clim.p_no_skill.has_value());
  CHECK(clim.success_rate == Approx(0.8));

  CHECK_THROWS_AS(skill_report(forecast_of({2001, 2002}, {150, 152}), obs, 7.0), Error);
}

TEST_CASE("skill report with a planted r = 0.78 over 11 years", "[report]") {
  // Forecast = r z + sqrt(1 - r^2) w with w orthogonal to z and equal norm gives
  // sample correlation exactly r.
  const std::vector<double> z{-1.5, -1.2, -0.8, -0.4, -0.1, 0.0, 0.2, 0.5, 0.9, 1.1, 1.3};
  double mz = 0;
  for (double v : z) mz += v;
  mz /= z.size();
  std::vector<double> zc, w;
  for (double v : z) zc.push_back(v - mz);
  for (std::size_t i = 0; i < z.size(); ++i) w.push_back((i % 2 ? 1.0 : -1.0) + 0.3 * std::sin(double(i)));
  double mw = 0;
  for (double v : w) mw += v;
  mw /= w.size();
  for (double& v : w) v -= mw;
  double zw = 0, zz = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    zw += zc[i] * w[i];
    zz += zc[i] * zc[i];
  }
  for (std::size_t i = 0; i < z.size(); ++i) w[i] -= zw / zz * zc[i];
  double ww = 0;
  for (double v : w) ww += v * v;
  const double r = 0.78;
  std::vector<int> years;
  std::vector<double> obs_v, f;
  for (std::size_t i = 0; i < z.size(); ++i) {
    years.push_back(1997 + static_cast<int>(i));
    obs_v.push_back(152 + 8 * zc[i]);
    f.push_back(152 + 8 * (r * zc[i] + std::sqrt(1 - r * r) * w[i] * std::sqrt(zz / ww)));
  }
  const auto rep = skill_report(forecast_of(years, f), OnsetSeries(years, obs_v), 7.0);
  CHECK(*rep.pearson_r == Approx(0.78).margin(1e-12));
  CHECK(*rep.p_no_skill == Approx(0.0023).margin(0.0002));
  CHECK(*rep.p_two_sided == Approx(2 * *rep.p_no_skill).margin(1e-15));
}
