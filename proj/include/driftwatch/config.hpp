#pragma once

#include <map>
#include <optional>
#include <string>

namespace driftwatch {

/// Full run configuration for baseline building and monitoring. Every field
/// can come from a JSON config file and be overridden by DRIFTWATCH_*
/// environment variables.
struct RunConfig {
  std::size_t window_size = 500;
  double epsilon = 1e-4;  // additive smoothing before log-based metrics
  std::size_t bin_count_covariate = 20;
  std::size_t bin_count_stability = 10;

  double ph_alpha = 0.005;
  std::optional<double> ph_lambda;  // unset: derived from the training error spread
  double eta0 = 0.9;
  double delta_alarm = 0.05;
  int eddm_warmup = 30;

  int trend_k = 5;
  std::map<std::string, double> chart_upper;  // per-metric upper-limit overrides
  bool strict = false;

  bool enable_covariate = true;
  bool enable_stability = true;
  bool enable_js = true;
  bool enable_wasserstein = true;
  bool enable_ks = true;
  bool enable_page_hinkley = true;
  bool enable_brier = true;
  bool enable_eddm = true;
  bool enable_hlnr = true;

  void validate() const;
};

/// Parse a JSON config document. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Apply DRIFTWATCH_<KEY> environment overrides (e.g. DRIFTWATCH_WINDOW_SIZE,
/// DRIFTWATCH_PH_LAMBDA, DRIFTWATCH_TREND_K, DRIFTWATCH_STRICT).
void apply_env_overrides(RunConfig& config);

}  // namespace driftwatch
