#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace driftwatch {

/// One prediction outcome as seen by the concept-drift detectors. y_true is
/// optional because ground truth may lag or never arrive.
struct PredictionRecord {
  std::optional<double> y_true;
  std::optional<double> y_pred;
  std::optional<double> y_prob;
  std::uint64_t timestamp = 0;
};

enum class PhDirection { Increase, Decrease };

struct PageHinkleyConfig {
  double alpha = 0.005;          // tolerance to change
  double lambda = 50.0;          // alarm threshold
  PhDirection direction = PhDirection::Increase;
  bool weighted = true;          // recency-weighted L_t vs plain cumulative sum
};

/// Page-Hinkley change detector on a stream of model errors. Tracks the
/// recency-weighted cumulative deviation L_t and its running extremum; the
/// statistic is the gap between them.
class PageHinkley {
public:
  explicit PageHinkley(PageHinkleyConfig config = {});

  struct Result {
    double ph = 0.0;
    bool alarm = false;
  };

  Result update(double error);
  void reset();

  double value() const { return last_ph_; }
  std::uint64_t count() const { return t_; }
  const PageHinkleyConfig& config() const { return config_; }

private:
  PageHinkleyConfig config_;
  std::uint64_t t_ = 0;
  double err_sum_ = 0.0;
  double acc_ = 0.0;        // L_t (weighted) or m_t (unweighted)
  double extremum_ = 0.0;   // running min (increase) or max (decrease)
  double last_ph_ = 0.0;
};

/// Mean squared difference between predicted probability and binary outcome.
/// Every record must carry y_true in {0,1} and y_prob.
double brier_score(const std::vector<PredictionRecord>& records);

enum class EddmLevel { Normal, Warning, Drift };

const char* to_string(EddmLevel level);

struct EddmConfig {
  int warmup_min_errors = 30;
  double warning_threshold = 0.95;
  double drift_threshold = 0.90;
};

/// Early Drift Detection Method: monitors the distribution of distances
/// between consecutive classification errors. The score is
/// (mu + 2*sigma) / (mu_max + 2*sigma_max); shrinking inter-error gaps pull
/// it below 1.
class Eddm {
public:
  explicit Eddm(EddmConfig config = {});

  struct Result {
    std::optional<double> value;  // absent before warm-up
    EddmLevel level = EddmLevel::Normal;
  };

  Result update(bool is_error);
  void reset();

  std::uint64_t error_count() const { return error_count_; }

private:
  double current_score() const;

  EddmConfig config_;
  std::uint64_t t_ = 0;
  std::uint64_t error_count_ = 0;
  std::optional<std::uint64_t> last_error_index_;
  std::uint64_t dist_count_ = 0;
  double dist_mean_ = 0.0;
  double dist_m2_ = 0.0;        // Welford accumulator
  double best_ = 0.0;           // max of mu + 2*sigma seen so far
  double best_mean_ = 0.0;
  double best_std_ = 0.0;
};

enum class ConfusionOutcome { TP, TN, FP, FN };
enum class RateKind { TPR, TNR, PPV, NPV };

const char* to_string(RateKind kind);

/// Standard rates from binary confusion counts. Rates with a zero denominator
/// are omitted from the result.
std::map<RateKind, double> rates_from_confusion(std::int64_t tn, std::int64_t fp,
                                                std::int64_t fn, std::int64_t tp);

struct HlnrConfig {
  double eta0 = 0.9;          // initial time decay
  double delta_alarm = 0.05;  // allowed degradation below the training rate
};

/// Holding-the-line rate monitor: exponentially-weighted tracking of
/// confusion-matrix rates with an adaptive time decay. Each outcome updates
/// only the rates it is evidence for.
class Hlnr {
public:
  Hlnr(const std::map<RateKind, double>& baselines, HlnrConfig config = {});

  /// Returns the rate kinds whose tracked value fell below
  /// baseline - delta_alarm after this outcome.
  std::vector<RateKind> update(ConfusionOutcome outcome);
  void reset();

  double rate(RateKind kind) const;
  double decay(RateKind kind) const;
  const std::map<RateKind, double>& baselines() const { return baselines_; }

private:
  void update_rate(RateKind kind, double indicator, std::vector<RateKind>& alarms);

  HlnrConfig config_;
  std::map<RateKind, double> baselines_;
  std::map<RateKind, double> rates_;
  std::map<RateKind, double> decays_;
};

}  // namespace driftwatch
