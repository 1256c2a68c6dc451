#include "driftwatch/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftwatch/errors.hpp"

namespace driftwatch {

using nlohmann::json;

void RunConfig::validate() const {
  if (window_size < 1) throw InvalidInput("config: window_size must be >= 1");
  if (epsilon <= 0.0) throw InvalidInput("config: epsilon must be > 0");
  if (bin_count_covariate < 2 || bin_count_stability < 2) {
    throw InvalidInput("config: bin counts must be >= 2");
  }
  if (ph_alpha < 0.0) throw InvalidInput("config: ph_alpha must be >= 0");
  if (ph_lambda && *ph_lambda <= 0.0) throw InvalidInput("config: ph_lambda must be > 0");
  if (eta0 <= 0.0 || eta0 >= 1.0) throw InvalidInput("config: eta0 must be in (0,1)");
  if (delta_alarm < 0.0) throw InvalidInput("config: delta_alarm must be >= 0");
  if (eddm_warmup < 1) throw InvalidInput("config: eddm_warmup must be >= 1");
  if (trend_k < 2) throw InvalidInput("config: trend_k must be >= 2");
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "window_size") cfg.window_size = value.get<std::size_t>();
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "bin_count_covariate") cfg.bin_count_covariate = value.get<std::size_t>();
      else if (key == "bin_count_stability") cfg.bin_count_stability = value.get<std::size_t>();
      else if (key == "ph_alpha") cfg.ph_alpha = value.get<double>();
      else if (key == "ph_lambda") cfg.ph_lambda = value.get<double>();
      else if (key == "eta0") cfg.eta0 = value.get<double>();
      else if (key == "delta_alarm") cfg.delta_alarm = value.get<double>();
      else if (key == "eddm_warmup") cfg.eddm_warmup = value.get<int>();
      else if (key == "trend_k") cfg.trend_k = value.get<int>();
      else if (key == "strict") cfg.strict = value.get<bool>();
      else if (key == "chart_upper") cfg.chart_upper = value.get<std::map<std::string, double>>();
      else if (key == "metrics") {
        for (const auto& [metric, enabled] : value.items()) {
          const bool on = enabled.get<bool>();
          if (metric == "covariate_drift") cfg.enable_covariate = on;
          else if (metric == "stability_index") cfg.enable_stability = on;
          else if (metric == "js_distance") cfg.enable_js = on;
          else if (metric == "wasserstein") cfg.enable_wasserstein = on;
          else if (metric == "ks") cfg.enable_ks = on;
          else if (metric == "page_hinkley") cfg.enable_page_hinkley = on;
          else if (metric == "brier") cfg.enable_brier = on;
          else if (metric == "eddm") cfg.enable_eddm = on;
          else if (metric == "hlnr") cfg.enable_hlnr = on;
          else throw ParseFailure("config: unknown metric toggle '" + metric + "'");
        }
      } else {
        throw ParseFailure("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ParseFailure("config: bad value for '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

double to_double(const std::string& s, const char* key) {
  try {
    return std::stod(s);
  } catch (...) {
    throw ParseFailure(std::string("env override ") + key + ": not a number: '" + s + "'");
  }
}

}  // namespace

void apply_env_overrides(RunConfig& cfg) {
  if (auto v = env("DRIFTWATCH_WINDOW_SIZE")) cfg.window_size = static_cast<std::size_t>(to_double(*v, "DRIFTWATCH_WINDOW_SIZE"));
  if (auto v = env("DRIFTWATCH_EPSILON")) cfg.epsilon = to_double(*v, "DRIFTWATCH_EPSILON");
  if (auto v = env("DRIFTWATCH_PH_ALPHA")) cfg.ph_alpha = to_double(*v, "DRIFTWATCH_PH_ALPHA");
  if (auto v = env("DRIFTWATCH_PH_LAMBDA")) cfg.ph_lambda = to_double(*v, "DRIFTWATCH_PH_LAMBDA");
  if (auto v = env("DRIFTWATCH_ETA0")) cfg.eta0 = to_double(*v, "DRIFTWATCH_ETA0");
  if (auto v = env("DRIFTWATCH_DELTA_ALARM")) cfg.delta_alarm = to_double(*v, "DRIFTWATCH_DELTA_ALARM");
  if (auto v = env("DRIFTWATCH_EDDM_WARMUP")) cfg.eddm_warmup = static_cast<int>(to_double(*v, "DRIFTWATCH_EDDM_WARMUP"));
  if (auto v = env("DRIFTWATCH_TREND_K")) cfg.trend_k = static_cast<int>(to_double(*v, "DRIFTWATCH_TREND_K"));
  if (auto v = env("DRIFTWATCH_STRICT")) cfg.strict = (*v == "1" || *v == "true");
  cfg.validate();
}

}  // namespace driftwatch
