#pragma once

// JSON forms of the reports and the human-readable verification table row.
// JSON carries probabilities; percentages appear only in text output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "skillaudit/biaslab.hpp"
#include "skillaudit/skill.hpp"

namespace skillaudit {

namespace detail {
inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
}  // namespace detail

inline nlohmann::json to_json(const SkillReport& r) {
  return {
      {"method_id", r.method_id},
      {"n", r.n},
      {"pearson_r", detail::optional_number(r.pearson_r)},
      {"p_no_skill", detail::optional_number(r.p_no_skill)},
      {"p_two_sided", detail::optional_number(r.p_two_sided)},
      {"success_rate", r.success_rate},
      {"tolerance_days", r.tolerance_days},
  };
}

inline SkillReport skill_report_from_json(const nlohmann::json& j) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  SkillReport r;
  r.method_id = j.at("method_id").get<std::string>();
  r.n = j.at("n").get<int>();
  r.pearson_r = opt("pearson_r");
  r.p_no_skill = opt("p_no_skill");
  r.p_two_sided = opt("p_two_sided");
  r.success_rate = j.at("success_rate").get<double>();
  r.tolerance_days = j.at("tolerance_days").get<double>();
  return r;
}

inline nlohmann::json to_json(const BiasLabResult& r) {
  return {
      {"mean_p_hat", r.mean_p_hat},
      {"se_p_hat", r.se_p_hat},
      {"mean_S_hat_at_p_hat", r.mean_S_hat_at_p_hat},
      {"se_S_hat", r.se_S_hat},
      {"mean_S2_at_p_hat", r.mean_S2_at_p_hat},
      {"se_S2", r.se_S2},
      {"S_at_p_opt", r.S_at_p_opt},
      {"bias", r.bias},
      {"n_trials", r.n_trials},
  };
}

/// Formats v with `digits` significant digits in fixed notation
/// (0.0023 -> "0.0023" at 2 digits, 50 -> "50", 0.0023 -> "0.002" at 1).
inline std::string format_significant(double v, int digits) {
  if (v == 0.0 || !std::isfinite(v)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }
  // Round first so that e.g. 0.0996 at 1 digit becomes 0.1, not 0.10.
  char sci[64];
  std::snprintf(sci, sizeof sci, "%.*e", digits - 1, v);
  const double rounded = std::strtod(sci, nullptr);
  const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(rounded))));
  const int decimals = std::max(0, digits - 1 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

inline std::string format_percent(double probability, int digits = 2) {
  return format_significant(100.0 * probability, digits) + "%";
}

inline std::string table_header() {
  return "method                         n       r   p(1s)   p(2s)  success   tol";
}

/// Verification table row with percentages for the p-values and success rate.
inline std::string table_row(const SkillReport& r) {
  auto pct = [](const std::optional<double>& v) { return v ? format_percent(*v) : std::string("n/a"); };
  char rbuf[32];
  if (r.pearson_r) {
    std::snprintf(rbuf, sizeof rbuf, "%.2f", *r.pearson_r);
  } else {
    std::snprintf(rbuf, sizeof rbuf, "undef");
  }
  char succ[32];
  std::snprintf(succ, sizeof succ, "%.1f%%", 100.0 * r.success_rate);
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %4d %7s %7s %7s %8s %5g", r.method_id.c_str(), r.n, rbuf,
                pct(r.p_no_skill).c_str(), pct(r.p_two_sided).c_str(), succ, r.tolerance_days);
  return line;
}

}  // namespace skillaudit
