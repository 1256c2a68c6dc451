#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/divergence.hpp"
#include "driftwatch/histogram.hpp"
#include "driftwatch/table.hpp"

namespace driftwatch {

enum class FeatureKind { Numeric, Categorical };
enum class FeatureRole { Predictor, Target, Prediction, Probability, Ignore };

const char* to_string(FeatureKind kind);
const char* to_string(FeatureRole role);
FeatureKind feature_kind_from_string(const std::string& s);
FeatureRole feature_role_from_string(const std::string& s);

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  FeatureRole role = FeatureRole::Predictor;
};

/// One equal-width binned view of a numeric feature.
struct BinnedView {
  BinEdges edges;
  Histogram hist;
};

/// Frozen training-time state for one feature.
struct FeatureBaseline {
  FeatureSchema schema;
  // Numeric predictors: 20-bin view for the non-intersection distance and
  // friends, 10-bin view for the stability index.
  std::optional<BinnedView> covariate;
  std::optional<BinnedView> stability;
  std::vector<double> quantiles;  // evenly spaced, for the EMD comparison
  // Categorical predictors.
  std::vector<std::string> vocabulary;
  std::optional<Histogram> categorical_hist;
  double missing_rate = 0.0;
  bool degenerate = false;  // constant column, excluded from drift metrics
  std::vector<KsReport> class_separation;
};

struct ConfusionCounts {
  std::int64_t tn = 0, fp = 0, fn = 0, tp = 0;
};

/// Everything monitoring needs, frozen at training time.
struct BaselineSnapshot {
  int format_version = 1;
  std::string created_at;
  std::vector<FeatureBaseline> features;
  std::optional<double> error_mean;    // mean of (y - y_hat)
  std::optional<double> error_stddev;  // spread of (y - y_hat), seeds the PH threshold
  std::optional<ConfusionCounts> confusion;
  std::optional<double> brier;

  const FeatureBaseline* find_feature(const std::string& name) const;
};

struct BaselineConfig {
  std::size_t bin_count_covariate = 20;
  std::size_t bin_count_stability = 10;
  std::size_t quantile_points = 101;
  std::string created_at = "1970-01-01T00:00:00Z";
};

/// Build the frozen reference snapshot from training data. Deterministic for
/// a fixed dataset and config.
BaselineSnapshot build_baseline(const Table& dataset, const std::vector<FeatureSchema>& schema,
                                const BaselineConfig& config = {});

/// Versioned, checksummed JSON document. load(save(s)) is field-for-field
/// identical to s.
void save_baseline(const BaselineSnapshot& snapshot, const std::string& path);
BaselineSnapshot load_baseline(const std::string& path);

std::string serialize_baseline(const BaselineSnapshot& snapshot);
BaselineSnapshot deserialize_baseline(const std::string& text);

}  // namespace driftwatch
