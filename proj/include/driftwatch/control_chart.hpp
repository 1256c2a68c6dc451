#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace driftwatch {

/// Rolling window of (window index, value) points for one metric on one
/// feature scope.
struct MetricSeries {
  std::string metric_id;
  std::vector<std::pair<std::int64_t, double>> points;
  std::size_t retention = 256;
};

/// Append a point; window indices must be strictly increasing. Oldest points
/// are evicted beyond retention.
void record(MetricSeries& series, std::int64_t window, double value);

enum class ChartStatus { InControl, Trending, Breach };
enum class ChartDirection { Rising, Falling };

const char* to_string(ChartStatus status);

/// Worst of two statuses (Breach dominates Trending dominates InControl).
ChartStatus worst(ChartStatus a, ChartStatus b);

/// Control limits for one metric series. The lower limit is fixed at 0;
/// distances and divergences degrade upward, EDDM degrades downward
/// (direction = Falling inverts breach and trend comparisons).
struct ControlChart {
  static constexpr double lower_limit = 0.0;
  double upper_limit = 0.2;
  ChartDirection direction = ChartDirection::Rising;
  int trend_k = 5;
};

/// Breach if the latest value is past the limit, Trending if the last
/// trend_k values move strictly toward the limit, else InControl.
ChartStatus evaluate(const ControlChart& chart, const MetricSeries& series);

/// Built-in limits: 0.2 for covariate drift and stability index, a falling
/// 0.90 threshold for EDDM, ph_lambda for Page-Hinkley.
ControlChart default_chart_for(const std::string& metric_id, double ph_lambda = 50.0);

}  // namespace driftwatch
