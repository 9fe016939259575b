#include "cli.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skillaudit/skillaudit.hpp"

namespace skillaudit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Argument syntax

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + " '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + " '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

// START:END
PeriodSpec parse_period(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw UsageError("period must look like START:END, got '" + s + "'");
  const int a = parse_int(parts[0], "period start");
  const int b = parse_int(parts[1], "period end");
  if (a > b) throw UsageError("period start after end in '" + s + "'");
  return PeriodSpec(a, b);
}

// START:END or a comma-separated year list.
std::vector<int> parse_years(const std::string& s) {
  if (s.find(':') != std::string::npos) return parse_period(s).years();
  std::vector<int> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_int(part, "year"));
  if (out.empty()) throw UsageError("empty year list");
  return out;
}

// loo | sliding:L | split:A:B,C:D
SplitScheme parse_scheme(const std::string& s) {
  if (s == "loo") return LeaveOneOut{};
  if (s.rfind("sliding:", 0) == 0) {
    const int len = parse_int(s.substr(8), "sliding window length");
    if (len < 3) throw UsageError("sliding window length must be >= 3");
    return SlidingWindow{len};
  }
  if (s.rfind("split:", 0) == 0) {
    const auto parts = split(s.substr(6), ',');
    if (parts.size() != 2) throw UsageError("split scheme must look like split:A:B,C:D");
    return FixedSplit{parse_period(parts[0]), parse_period(parts[1])};
  }
  throw UsageError("unknown scheme '" + s + "' (loo | sliding:L | split:A:B,C:D)");
}

// infold | fixed:A:B
ScreeningPlacement parse_screening(const std::string& s) {
  if (s == "infold") return InFold{};
  if (s.rfind("fixed:", 0) == 0) return FixedPeriodScreening{parse_period(s.substr(6))};
  throw UsageError("unknown screening placement '" + s + "' (infold | fixed:A:B)");
}

// var:TAU | fixed:K
ComponentRule parse_components(const std::string& s) {
  if (s.rfind("var:", 0) == 0) return VarianceFraction{parse_double(s.substr(4), "variance fraction")};
  if (s.rfind("fixed:", 0) == 0) return FixedComponents{parse_int(s.substr(6), "component count")};
  throw UsageError("unknown component rule '" + s + "' (var:TAU | fixed:K)");
}

std::string describe(const ComponentRule& rule) {
  if (const auto* f = std::get_if<FixedComponents>(&rule)) return "fixed:" + std::to_string(f->k);
  return "var:" + csv::format_number(std::get<VarianceFraction>(rule).tau);
}

// ---------------------------------------------------------------------------
// Files and manifests

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Numeric, "sha256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

/// Collects inputs and outputs of one run and writes manifest.json last.
class Run {
 public:
  Run(std::string command, std::string out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

  std::string input(const std::string& path) {
    auto bytes = read_file(path);
    digests_[path] = "sha256:" + sha256_hex(bytes);
    return bytes;
  }

  void output(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir_);
    const auto path = fs::path(out_dir_) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Data, "cannot write '" + path.string() + "'");
    out << content;
    outputs_.push_back(name);
  }

  void finish(const json& config, std::uint64_t seed) {
    json manifest = {
        {"command", command_}, {"config", config}, {"seed", seed}, {"input_digests", digests_}, {"outputs", outputs_},
    };
    output("manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string out_dir_;
  std::map<std::string, std::string> digests_;
  std::vector<std::string> outputs_;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("SKILLAUDIT_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

template <typename T>
std::string to_csv(const T& value, void (*writer)(std::ostream&, const T&)) {
  std::ostringstream s;
  writer(s, value);
  return s.str();
}

// ---------------------------------------------------------------------------
// Commands

struct PvalueArgs {
  double r = 0.0;
  int n = 0;
  std::string sided = "one";
};

int cmd_pvalue(const PvalueArgs& a, std::ostream& out) {
  if (!(a.r >= -1.0 && a.r <= 1.0)) throw UsageError("--r must lie in [-1, 1]");
  if (a.n < 3) throw UsageError("--n must be >= 3");
  if (a.sided != "one" && a.sided != "two" && a.sided != "both") throw UsageError("--sided must be one, two or both");
  out << "r = " << csv::format_number(a.r) << ", n = " << a.n << "\n";
  auto line = [&](Sided sided, const char* label) {
    const double p = no_skill_p_value(a.r, a.n, sided);
    out << label << ": p = " << format_significant(p, 2) << " (" << format_percent(p) << "), "
        << "1 significant digit: p = " << format_significant(p, 1) << "\n";
  };
  if (a.sided == "one" || a.sided == "both") line(Sided::One, "one-sided");
  if (a.sided == "two" || a.sided == "both") line(Sided::Two, "two-sided");
  return kSuccess;
}

struct OverlapArgs {
  std::string model;
  std::string verify;
};

int cmd_overlap(const OverlapArgs& a, std::ostream& out) {
  const auto model = parse_period(a.model);
  const auto years = parse_years(a.verify);
  const auto count = overlap_count(model, years);
  const double frac = overlap_fraction(model, years);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * frac);
  out << count << " years, " << pct << "\n";
  out << "overlap of " << count << " of " << years.size() << " verification years with " << a.model
      << " (fraction " << csv::format_number(frac) << ")\n";
  return kSuccess;
}

struct VerifyArgs {
  std::string forecast;
  std::string obs;
  double tolerance = 7.0;
  std::string method = "forecast";
  std::string out_dir;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  Run run("verify", a.out_dir.empty() ? default_out_dir() : a.out_dir);
  std::istringstream fin(run.input(a.forecast));
  std::istringstream oin(run.input(a.obs));
  const auto forecasts = csv::read_forecast(fin, a.forecast, a.method);
  const auto obs = csv::read_onset(oin, a.obs);
  const auto report = skill_report(forecasts, obs, a.tolerance);
  const auto j = to_json(report);
  out << j.dump(2) << "\n" << table_header() << "\n" << table_row(report) << "\n";
  if (!a.out_dir.empty()) {
    run.output("report.json", j.dump(2) + "\n");
    run.finish({{"forecast", a.forecast}, {"obs", a.obs}, {"tolerance_days", a.tolerance}, {"method", a.method}}, 0);
  }
  return kSuccess;
}

struct HindcastArgs {
  std::string panel;
  std::string onset;
  std::string scheme = "sliding:22";
  std::string screening = "infold";
  int top_k = 9;
  double min_abs_r = 0.0;
  std::string components = "var:0.9";
  double tolerance = 7.0;
  int issue_doy = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_dir;
};

int cmd_hindcast(const HindcastArgs& a, std::ostream& out) {
  const auto scheme = parse_scheme(a.scheme);
  const auto placement = parse_screening(a.screening);
  PCRConfig cfg;
  cfg.screening = ScreeningConfig{a.top_k, a.min_abs_r};
  cfg.n_components = parse_components(a.components);
  cfg.validate();

  Run run("hindcast", a.out_dir.empty() ? default_out_dir() : a.out_dir);
  std::istringstream pin(run.input(a.panel));
  std::istringstream oin(run.input(a.onset));
  const auto panel = csv::read_panel(pin, a.panel);
  const auto obs = csv::read_onset(oin, a.onset);

  CvOptions options;
  options.tolerance_days = a.tolerance;
  options.issue_doy = a.issue_doy;
  options.workers = a.workers;
  CvResult result;
  try {
    result = imd_hindcast(panel, obs, cfg, placement, scheme, options);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InsufficientSample) throw Error(ErrorKind::SchemeInfeasible, e.what());
    throw;
  }

  json folds = json::array();
  for (const auto& f : result.folds) folds.push_back({{"test_years", f.fold.test_years}, {"selected", f.selected}});
  json report = {
      {"report", to_json(result.report)},
      {"screening_placement", describe(placement)},
      {"scheme", describe(scheme)},
      {"overlap_fraction", result.overlap},
      {"folds", folds},
  };
  std::ostringstream fc;
  csv::write_forecast(fc, result.forecasts, obs);
  run.output("forecasts.csv", fc.str());
  run.output("report.json", report.dump(2) + "\n");
  run.finish({{"panel", a.panel},
              {"onset", a.onset},
              {"scheme", describe(scheme)},
              {"screening", describe(placement)},
              {"top_k", a.top_k},
              {"min_abs_r", a.min_abs_r},
              {"components", describe(cfg.n_components)},
              {"tolerance_days", a.tolerance},
              {"issue_doy", a.issue_doy}},
             a.seed);

  out << report.dump(2) << "\n" << table_header() << "\n" << table_row(result.report) << "\n";
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * result.overlap);
  out << "screening placement: " << describe(placement) << ", overlap with verification years: " << pct << "\n";
  return kSuccess;
}

struct TeArgs {
  std::string t_np;
  std::string t_eg;
  std::string onset;
  int issue_doy = 125;
  int window = 14;
  int season_end = 243;
  std::string fallback = "error";
  std::string scheme = "loo";
  double tolerance = 7.0;
  std::string out_dir;
};

int cmd_te(const TeArgs& a, std::ostream& out) {
  TEConfig cfg;
  cfg.issue_doy = a.issue_doy;
  cfg.trend_window_days = a.window;
  cfg.season_end_doy = a.season_end;
  if (a.fallback == "error") {
    cfg.fallback = NoCrossingFallback::Error;
  } else if (a.fallback == "climatology") {
    cfg.fallback = NoCrossingFallback::Climatology;
  } else {
    throw UsageError("--fallback must be error or climatology");
  }
  cfg.validate();
  const auto scheme = parse_scheme(a.scheme);

  Run run("te", a.out_dir.empty() ? default_out_dir() : a.out_dir);
  std::istringstream npin(run.input(a.t_np));
  std::istringstream egin(run.input(a.t_eg));
  std::istringstream oin(run.input(a.onset));
  const auto t_np = csv::read_daily(npin, a.t_np, "NP");
  const auto t_eg = csv::read_daily(egin, a.t_eg, "EG");
  const auto obs = csv::read_onset(oin, a.onset);

  const auto hc = te_hindcast(t_np, t_eg, obs, scheme, cfg);

  json te_report = nullptr;
  std::optional<double> te_success;
  if (hc.te.size() >= 3) {
    const auto r = skill_report(hc.te, obs, a.tolerance);
    te_report = to_json(r);
    te_success = r.success_rate;
  } else if (hc.te.size() >= 1) {
    te_success = success_rate(hc.te, obs, a.tolerance);
  }
  const auto clim = skill_report(hc.climatology, obs, a.tolerance);

  std::ostringstream fc;
  fc << "year,te_doy,climatology_doy,observed_doy,threshold,status\n";
  for (const auto& y : hc.years) {
    fc << y.year << ',' << (y.te ? csv::format_number(*y.te) : std::string()) << ','
       << csv::format_number(y.climatology) << ',' << csv::format_number(*obs.at(y.year)) << ','
       << csv::format_number(y.threshold) << ',' << y.status << '\n';
  }
  int failures = 0;
  for (const auto& y : hc.years) failures += y.status == "no_crossing" ? 1 : 0;

  json report = {
      {"te", te_report},
      {"te_success_rate", te_success ? json(*te_success) : json(nullptr)},
      {"te_forecast_count", hc.te.size()},
      {"te_no_crossing_count", failures},
      {"climatology", to_json(clim)},
      {"climatology_success_rate", clim.success_rate},
      {"tolerance_days", a.tolerance},
      {"scheme", describe(scheme)},
  };
  run.output("te_forecasts.csv", fc.str());
  run.output("report.json", report.dump(2) + "\n");
  run.finish({{"t_np", a.t_np},
              {"t_eg", a.t_eg},
              {"onset", a.onset},
              {"issue_doy", a.issue_doy},
              {"trend_window_days", a.window},
              {"season_end_doy", a.season_end},
              {"fallback", a.fallback},
              {"scheme", describe(scheme)},
              {"tolerance_days", a.tolerance}},
             0);

  out << report.dump(2) << "\n";
  char te_pct[32] = "n/a";
  if (te_success) std::snprintf(te_pct, sizeof te_pct, "%.1f%%", 100.0 * *te_success);
  char clim_pct[32];
  std::snprintf(clim_pct, sizeof clim_pct, "%.1f%%", 100.0 * clim.success_rate);
  out << "success rate at " << csv::format_number(a.tolerance) << " days: te " << te_pct << " | climatology "
      << clim_pct << "\n";
  return kSuccess;
}

struct BiaslabArgs {
  int grid_points = 21;
  double p_min = 0.0;
  double p_max = 1.0;
  double p_opt = 0.5;
  double s_max = 0.8;
  double curvature = 1.0;
  double noise = 0.1;
  int trials = 10000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::string out_dir;
};

int cmd_biaslab(const BiaslabArgs& a, std::ostream& out) {
  BiasLabConfig cfg;
  if (a.grid_points < 5) throw UsageError("--grid-points must be >= 5");
  if (!(a.p_max > a.p_min)) throw UsageError("--p-max must exceed --p-min");
  cfg.curve = SkillCurve{a.s_max, a.curvature, a.p_opt, linspace_grid(a.p_min, a.p_max, a.grid_points)};
  cfg.noise_sd = a.noise;
  cfg.n_trials = a.trials;
  cfg.seed = a.seed;
  cfg.validate();

  const auto result = run_bias_experiment(cfg, a.workers);
  const auto sample = draw_bias_sample(cfg, 0);

  // p_opt marker goes on the grid point nearest to p_opt.
  std::size_t opt_index = 0;
  for (std::size_t i = 1; i < cfg.curve.grid.size(); ++i) {
    if (std::fabs(cfg.curve.grid[i] - a.p_opt) < std::fabs(cfg.curve.grid[opt_index] - a.p_opt)) opt_index = i;
  }
  std::ostringstream plot;
  plot << "p,S,S_hat_sample,marker\n";
  for (std::size_t i = 0; i < cfg.curve.grid.size(); ++i) {
    const double p = cfg.curve.grid[i];
    std::string marker;
    if (i == opt_index) marker = "p_opt";
    if (i == sample.argmax) marker += marker.empty() ? "p_hat" : "|p_hat";
    plot << csv::format_number(p) << ',' << csv::format_number(skill_curve_eval(cfg.curve, p)) << ','
         << csv::format_number(sample.s_hat[i]) << ',' << marker << '\n';
  }

  json config = {{"grid_points", a.grid_points}, {"p_min", a.p_min}, {"p_max", a.p_max},   {"p_opt", a.p_opt},
                 {"s_max", a.s_max},             {"curvature", a.curvature}, {"noise_sd", a.noise}, {"n_trials", a.trials}};
  json report = to_json(result);
  report["config"] = config;

  Run run("biaslab", a.out_dir.empty() ? default_out_dir() : a.out_dir);
  run.output("biaslab.json", report.dump(2) + "\n");
  run.output("biaslab_curve.csv", plot.str());
  run.finish(config, a.seed);
  out << report.dump(2) << "\n";
  return kSuccess;
}

struct ScreenlabArgs {
  int n_years = 30;
  int n_predictors = 50;
  int trials = 1000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::string out_dir;
};

int cmd_screenlab(const ScreenlabArgs& a, std::ostream& out) {
  if (a.n_years < 10) throw UsageError("--n-years must be >= 10");
  if (a.n_predictors < 1) throw UsageError("--n-predictors must be >= 1");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const auto clean = screening_noise_experiment(a.n_years, a.n_predictors, a.trials, a.seed, PlacementMode::InFold, a.workers);
  const auto leaky =
      screening_noise_experiment(a.n_years, a.n_predictors, a.trials, a.seed, PlacementMode::FullPeriod, a.workers);
  const double diff = leaky.mean_apparent_r - clean.mean_apparent_r;
  const double pooled = std::sqrt(leaky.se * leaky.se + clean.se * clean.se);
  json config = {{"n_years", a.n_years}, {"n_predictors", a.n_predictors}, {"n_trials", a.trials}};
  json report = {
      {"clean", {{"placement", to_string(PlacementMode::InFold)}, {"mean_apparent_r", clean.mean_apparent_r}, {"se", clean.se}}},
      {"leaky", {{"placement", to_string(PlacementMode::FullPeriod)}, {"mean_apparent_r", leaky.mean_apparent_r}, {"se", leaky.se}}},
      {"difference", diff},
      {"pooled_se", pooled},
      {"config", config},
  };
  Run run("screenlab", a.out_dir.empty() ? default_out_dir() : a.out_dir);
  run.output("screenlab.json", report.dump(2) + "\n");
  run.finish(config, a.seed);
  out << report.dump(2) << "\n";
  return kSuccess;
}

struct SynthArgs {
  std::string kind;
  // onset
  std::string years = "1965:2015";
  double mean = 152.0;
  double sd = 8.0;
  double phi = 0.3;
  // panel / te
  std::string onset;
  int n_signal = 1;
  double signal_r = 0.8;
  int n_noise = 20;
  double threshold = 300.0;
  double slope = 0.5;
  int lead_days = 60;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  Run run("synth " + a.kind, a.out_dir.empty() ? default_out_dir() : a.out_dir);
  json config;
  if (a.kind == "onset") {
    const auto period = parse_period(a.years);
    const auto series = gen_onset_series(period.start_year, period.length(), a.mean, a.sd, a.phi, a.seed);
    run.output("onset.csv", to_csv(series, &csv::write_onset));
    config = {{"years", a.years}, {"mean_doy", a.mean}, {"sd", a.sd}, {"phi", a.phi}};
  } else if (a.kind == "panel" || a.kind == "te") {
    if (a.onset.empty()) throw UsageError("--onset is required for synth " + a.kind);
    std::istringstream oin(run.input(a.onset));
    const auto onset = csv::read_onset(oin, a.onset);
    if (a.kind == "panel") {
      const auto panel = gen_panel(onset, a.n_signal, a.signal_r, a.n_noise, a.seed);
      run.output("panel.csv", to_csv(panel, &csv::write_panel));
      config = {{"onset", a.onset}, {"n_signal", a.n_signal}, {"signal_r", a.signal_r}, {"n_noise", a.n_noise}};
    } else {
      const auto t_np = gen_te_daily(onset.years(), onset, a.threshold, a.slope, a.lead_days, a.noise, a.seed);
      const auto t_eg = gen_flat_daily(onset.years(), a.threshold);
      run.output("t_np.csv", to_csv(t_np, &csv::write_daily));
      run.output("t_eg.csv", to_csv(t_eg, &csv::write_daily));
      config = {{"onset", a.onset},         {"threshold", a.threshold}, {"slope", a.slope},
                {"lead_days", a.lead_days}, {"noise_sd", a.noise}};
    }
  } else {
    throw UsageError("synth kind must be onset, panel or te");
  }
  run.finish(config, a.seed);
  out << "wrote synth " << a.kind << " fixture\n";
  return kSuccess;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kUsage;
    case ErrorKind::NoOverlap:
    case ErrorKind::InsufficientSample: return kNoOverlap;
    case ErrorKind::SchemeInfeasible: return kSchemeInfeasible;
    default: return kDataError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forecast verification and artificial-skill audit toolkit", "skillaudit"};
  app.require_subcommand(1);

  PvalueArgs pv;
  auto* pvalue = app.add_subcommand("pvalue", "No-skill p-value of a correlation");
  pvalue->add_option("--r", pv.r, "Sample correlation")->required();
  pvalue->add_option("--n", pv.n, "Sample size")->required();
  pvalue->add_option("--sided", pv.sided, "one | two | both")->capture_default_str();

  OverlapArgs ov;
  auto* overlap = app.add_subcommand("overlap", "Overlap of a model-definition period with verification years");
  overlap->add_option("--model", ov.model, "Model-definition period START:END")->required();
  overlap->add_option("--verify", ov.verify, "Verification period START:END or year list")->required();

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "Skill report for a forecast file against observed onsets");
  verify->add_option("--forecast", vf.forecast, "Forecast CSV (year,predicted_doy)")->required();
  verify->add_option("--obs", vf.obs, "Onset CSV (year,onset_doy)")->required();
  verify->add_option("--tolerance", vf.tolerance, "Success tolerance in days")->capture_default_str();
  verify->add_option("--method", vf.method, "Method id for the report")->capture_default_str();
  verify->add_option("--out-dir", vf.out_dir, "Also write report.json and manifest.json here");

  HindcastArgs hc;
  auto* hindcast = app.add_subcommand("hindcast", "Screening + PCR cross-validated hindcast");
  hindcast->add_option("--panel", hc.panel, "Predictor panel CSV")->required();
  hindcast->add_option("--onset", hc.onset, "Onset CSV")->required();
  hindcast->add_option("--scheme", hc.scheme, "loo | sliding:L | split:A:B,C:D")->capture_default_str();
  hindcast->add_option("--screening", hc.screening, "infold | fixed:A:B")->capture_default_str();
  hindcast->add_option("--top-k", hc.top_k, "Predictors kept by screening")->capture_default_str();
  hindcast->add_option("--min-abs-r", hc.min_abs_r, "Screening |r| floor")->capture_default_str();
  hindcast->add_option("--components", hc.components, "var:TAU | fixed:K")->capture_default_str();
  hindcast->add_option("--tolerance", hc.tolerance, "Success tolerance in days")->capture_default_str();
  hindcast->add_option("--issue-doy", hc.issue_doy, "Issue day of year recorded with the forecasts")->capture_default_str();
  hindcast->add_option("--seed", hc.seed, "Recorded in the manifest")->capture_default_str();
  hindcast->add_option("--workers", hc.workers, "Folds evaluated in parallel")->capture_default_str();
  hindcast->add_option("--out-dir", hc.out_dir, "Output directory");

  TeArgs te;
  auto* te_cmd = app.add_subcommand("te", "Trend-threshold hindcast with climatology baseline");
  te_cmd->add_option("--t-np", te.t_np, "Daily CSV of the extrapolated variable")->required();
  te_cmd->add_option("--t-eg", te.t_eg, "Daily CSV defining the threshold")->required();
  te_cmd->add_option("--onset", te.onset, "Onset CSV")->required();
  te_cmd->add_option("--issue-doy", te.issue_doy, "Issue day of year")->capture_default_str();
  te_cmd->add_option("--window", te.window, "Trend window in days")->capture_default_str();
  te_cmd->add_option("--season-end", te.season_end, "Latest admissible onset day")->capture_default_str();
  te_cmd->add_option("--fallback", te.fallback, "error | climatology")->capture_default_str();
  te_cmd->add_option("--scheme", te.scheme, "loo | sliding:L | split:A:B,C:D")->capture_default_str();
  te_cmd->add_option("--tolerance", te.tolerance, "Success tolerance in days")->capture_default_str();
  te_cmd->add_option("--out-dir", te.out_dir, "Output directory");

  BiaslabArgs bl;
  auto* biaslab = app.add_subcommand("biaslab", "Monte Carlo model-selection bias experiment");
  biaslab->add_option("--grid-points", bl.grid_points)->capture_default_str();
  biaslab->add_option("--p-min", bl.p_min)->capture_default_str();
  biaslab->add_option("--p-max", bl.p_max)->capture_default_str();
  biaslab->add_option("--p-opt", bl.p_opt)->capture_default_str();
  biaslab->add_option("--s-max", bl.s_max)->capture_default_str();
  biaslab->add_option("--curvature", bl.curvature)->capture_default_str();
  biaslab->add_option("--noise", bl.noise, "Noise sd on the estimated skill")->capture_default_str();
  biaslab->add_option("--trials", bl.trials)->capture_default_str();
  biaslab->add_option("--seed", bl.seed)->capture_default_str();
  biaslab->add_option("--workers", bl.workers)->capture_default_str();
  biaslab->add_option("--out-dir", bl.out_dir, "Output directory");

  ScreenlabArgs sl;
  auto* screenlab = app.add_subcommand("screenlab", "Artificial skill from predictor screening on pure noise");
  screenlab->add_option("--n-years", sl.n_years)->capture_default_str();
  screenlab->add_option("--n-predictors", sl.n_predictors)->capture_default_str();
  screenlab->add_option("--trials", sl.trials)->capture_default_str();
  screenlab->add_option("--seed", sl.seed)->capture_default_str();
  screenlab->add_option("--workers", sl.workers)->capture_default_str();
  screenlab->add_option("--out-dir", sl.out_dir, "Output directory");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write synthetic fixture CSVs");
  synth->add_option("kind", sy.kind, "onset | panel | te")->required();
  synth->add_option("--years", sy.years, "START:END (onset)")->capture_default_str();
  synth->add_option("--mean", sy.mean, "Mean onset day (onset)")->capture_default_str();
  synth->add_option("--sd", sy.sd, "Onset sd in days (onset)")->capture_default_str();
  synth->add_option("--phi", sy.phi, "Lag-1 autocorrelation (onset)")->capture_default_str();
  synth->add_option("--onset", sy.onset, "Onset CSV (panel, te)");
  synth->add_option("--n-signal", sy.n_signal)->capture_default_str();
  synth->add_option("--signal-r", sy.signal_r)->capture_default_str();
  synth->add_option("--n-noise", sy.n_noise)->capture_default_str();
  synth->add_option("--threshold", sy.threshold)->capture_default_str();
  synth->add_option("--slope", sy.slope)->capture_default_str();
  synth->add_option("--lead-days", sy.lead_days)->capture_default_str();
  synth->add_option("--noise", sy.noise)->capture_default_str();
  synth->add_option("--seed", sy.seed)->capture_default_str();
  synth->add_option("--out-dir", sy.out_dir, "Output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (pvalue->parsed()) return cmd_pvalue(pv, out);
    if (overlap->parsed()) return cmd_overlap(ov, out);
    if (verify->parsed()) return cmd_verify(vf, out);
    if (hindcast->parsed()) return cmd_hindcast(hc, out);
    if (te_cmd->parsed()) return cmd_te(te, out);
    if (biaslab->parsed()) return cmd_biaslab(bl, out);
    if (screenlab->parsed()) return cmd_screenlab(sl, out);
    if (synth->parsed()) return cmd_synth(sy, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace skillaudit::cli
