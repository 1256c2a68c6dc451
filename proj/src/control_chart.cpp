#include "driftwatch/control_chart.hpp"

#include <cmath>

#include "driftwatch/errors.hpp"

namespace driftwatch {

void record(MetricSeries& series, std::int64_t window, double value) {
  if (!std::isfinite(value)) throw InvalidInput("record: non-finite value");
  if (!series.points.empty() && window <= series.points.back().first) {
    throw InvalidInput("record: window index must be strictly increasing");
  }
  series.points.emplace_back(window, value);
  while (series.points.size() > series.retention) {
    series.points.erase(series.points.begin());
  }
}

const char* to_string(ChartStatus status) {
  switch (status) {
    case ChartStatus::InControl: return "in_control";
    case ChartStatus::Trending: return "trending";
    case ChartStatus::Breach: return "breach";
  }
  return "?";
}

ChartStatus worst(ChartStatus a, ChartStatus b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

ChartStatus evaluate(const ControlChart& chart, const MetricSeries& series) {
  if (series.points.empty()) throw EmptyInput("evaluate: empty series");
  if (chart.upper_limit <= 0.0) throw InvalidInput("evaluate: upper_limit must be > 0");
  if (chart.trend_k < 2) throw InvalidInput("evaluate: trend_k must be >= 2");

  const bool rising = chart.direction == ChartDirection::Rising;
  const double latest = series.points.back().second;
  if (rising ? latest > chart.upper_limit : latest < chart.upper_limit) {
    return ChartStatus::Breach;
  }
  const std::size_t k = static_cast<std::size_t>(chart.trend_k);
  if (series.points.size() >= k) {
    bool trending = true;
    const std::size_t start = series.points.size() - k;
    for (std::size_t i = start + 1; i < series.points.size(); ++i) {
      const double prev = series.points[i - 1].second;
      const double cur = series.points[i].second;
      if (rising ? cur <= prev : cur >= prev) {
        trending = false;
        break;
      }
    }
    if (trending) return ChartStatus::Trending;
  }
  return ChartStatus::InControl;
}

ControlChart default_chart_for(const std::string& metric_id, double ph_lambda) {
  if (metric_id == "covariate_drift") return {.upper_limit = 0.2};
  if (metric_id == "stability_index") return {.upper_limit = 0.2};
  if (metric_id == "eddm") return {.upper_limit = 0.90, .direction = ChartDirection::Falling};
  if (metric_id == "page_hinkley") return {.upper_limit = ph_lambda};
  throw UnknownMetric("default_chart_for: no default for '" + metric_id + "'");
}

}  // namespace driftwatch
