#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/baseline.hpp"
#include "driftwatch/config.hpp"
#include "driftwatch/control_chart.hpp"
#include "driftwatch/detectors.hpp"

namespace driftwatch {

/// Windowed monitoring pipeline. Feed newline-delimited JSON records; every
/// full window produces one report document comparing the window against the
/// frozen baseline. Replay-deterministic: no wall-clock state.
class Monitor {
public:
  Monitor(BaselineSnapshot baseline, RunConfig config);

  /// Ingest one NDJSON record line. Returns a report document when this
  /// record completes a window. Malformed lines are counted and skipped
  /// (fatal under strict mode).
  std::optional<std::string> ingest_line(const std::string& line);

  /// Flush a trailing partial window, if any.
  std::optional<std::string> finish();

  ChartStatus worst_seen() const { return worst_; }
  std::uint64_t records_ingested() const { return total_records_; }
  std::uint64_t records_skipped() const { return total_skipped_; }
  double ph_lambda() const { return ph_lambda_; }

private:
  struct FeatureWindow {
    std::vector<double> numeric;
    std::vector<std::string> categorical;
    std::size_t missing = 0;
    std::vector<double> labeled_values;
    std::vector<std::string> labeled_classes;
  };

  void reset_window();
  std::string emit_window(bool partial);
  MetricSeries& series_for(const std::string& id);
  ChartStatus evaluate_series(const std::string& id, const ControlChart& chart);

  BaselineSnapshot baseline_;
  RunConfig config_;
  double ph_lambda_ = 50.0;
  bool classification_ = false;

  // Monitored (non-degenerate predictor) features and their smoothed
  // baseline histograms.
  struct MonitoredFeature {
    const FeatureBaseline* fb;
    Histogram stability_smoothed;  // numeric
    Histogram categorical_smoothed;
  };
  std::vector<MonitoredFeature> monitored_;

  std::optional<PageHinkley> ph_increase_;
  std::optional<PageHinkley> ph_decrease_;
  std::optional<Eddm> eddm_;
  std::optional<Hlnr> hlnr_;

  std::map<std::string, FeatureWindow> window_;
  std::vector<PredictionRecord> window_brier_;
  std::vector<std::string> window_hlnr_alarms_;
  std::optional<Eddm::Result> last_eddm_;
  std::optional<PageHinkley::Result> last_ph_inc_;
  std::optional<PageHinkley::Result> last_ph_dec_;

  std::map<std::string, MetricSeries> series_;
  std::map<std::string, ControlChart> charts_;

  std::uint64_t total_records_ = 0;
  std::uint64_t total_skipped_ = 0;
  std::uint64_t window_records_ = 0;
  std::uint64_t window_skipped_ = 0;
  std::uint64_t window_first_record_ = 0;
  std::int64_t window_index_ = 0;
  ChartStatus worst_ = ChartStatus::InControl;
};

/// Aggregate a stream of report documents into a run summary: worst verdict,
/// first breach window, and features ranked by latest covariate drift.
std::string summarize_reports(std::istream& reports);

int exit_code_for(ChartStatus status);

}  // namespace driftwatch
