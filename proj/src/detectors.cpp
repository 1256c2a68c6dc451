#include "driftwatch/detectors.hpp"

#include <cmath>

#include "driftwatch/errors.hpp"

namespace driftwatch {

PageHinkley::PageHinkley(PageHinkleyConfig config) : config_(config) {
  if (config_.alpha < 0.0) throw InvalidInput("PageHinkley: alpha must be >= 0");
  if (config_.lambda <= 0.0) throw InvalidInput("PageHinkley: lambda must be > 0");
}

PageHinkley::Result PageHinkley::update(double error) {
  if (!std::isfinite(error)) throw InvalidInput("PageHinkley: non-finite error");
  ++t_;
  err_sum_ += error;
  const double mean = err_sum_ / static_cast<double>(t_);
  // Mirrored directions: the tolerance pushes the statistic away from the
  // alarm side, so its sign flips with the direction.
  const double dev = (config_.direction == PhDirection::Increase)
                         ? error - mean - config_.alpha
                         : error - mean + config_.alpha;
  if (config_.weighted) {
    const double j = static_cast<double>(t_);
    acc_ = ((j - 1.0) / j) * acc_ + dev;
  } else {
    acc_ += dev;
  }
  if (t_ == 1) {
    extremum_ = acc_;
  } else if (config_.direction == PhDirection::Increase) {
    extremum_ = std::min(extremum_, acc_);
  } else {
    extremum_ = std::max(extremum_, acc_);
  }
  last_ph_ = (config_.direction == PhDirection::Increase) ? acc_ - extremum_ : extremum_ - acc_;
  return {last_ph_, last_ph_ >= config_.lambda};
}

void PageHinkley::reset() {
  t_ = 0;
  err_sum_ = 0.0;
  acc_ = 0.0;
  extremum_ = 0.0;
  last_ph_ = 0.0;
}

double brier_score(const std::vector<PredictionRecord>& records) {
  if (records.empty()) throw EmptyInput("brier_score: no records");
  double sum = 0.0;
  for (const auto& r : records) {
    if (!r.y_prob.has_value()) throw InvalidInput("brier_score: record missing probability");
    if (!r.y_true.has_value() || (*r.y_true != 0.0 && *r.y_true != 1.0)) {
      throw InvalidInput("brier_score: y_true must be 0 or 1");
    }
    const double d = *r.y_true - *r.y_prob;
    sum += d * d;
  }
  return sum / static_cast<double>(records.size());
}

const char* to_string(EddmLevel level) {
  switch (level) {
    case EddmLevel::Normal: return "normal";
    case EddmLevel::Warning: return "warning";
    case EddmLevel::Drift: return "drift";
  }
  return "?";
}

Eddm::Eddm(EddmConfig config) : config_(config) {
  if (config_.warmup_min_errors < 1) throw InvalidInput("Eddm: warmup must be >= 1");
}

double Eddm::current_score() const {
  const double sigma = (dist_count_ > 0) ? std::sqrt(std::max(dist_m2_ / static_cast<double>(dist_count_), 0.0)) : 0.0;
  return dist_mean_ + 2.0 * sigma;
}

Eddm::Result Eddm::update(bool is_error) {
  ++t_;
  if (is_error) {
    ++error_count_;
    if (last_error_index_.has_value()) {
      const double d = static_cast<double>(t_ - *last_error_index_);
      ++dist_count_;
      const double delta = d - dist_mean_;
      dist_mean_ += delta / static_cast<double>(dist_count_);
      dist_m2_ += delta * (d - dist_mean_);
      // The warm-up period is pure estimation: a maximum frozen from a
      // handful of noisy early distances would be unreachable afterwards and
      // misread a stable stream as drifting.
      if (error_count_ >= static_cast<std::uint64_t>(config_.warmup_min_errors)) {
        const double cur = current_score();
        if (cur > best_) {
          best_ = cur;
          best_mean_ = dist_mean_;
          best_std_ = (cur - dist_mean_) / 2.0;
        }
      }
    }
    last_error_index_ = t_;
  }

  Result result;
  if (error_count_ >= static_cast<std::uint64_t>(config_.warmup_min_errors) && best_ > 0.0) {
    const double ratio = current_score() / best_;
    result.value = ratio;
    if (ratio > config_.warning_threshold) {
      result.level = EddmLevel::Normal;
    } else if (ratio > config_.drift_threshold) {
      result.level = EddmLevel::Warning;
    } else {
      result.level = EddmLevel::Drift;
      if (is_error) {
        // Reset the maximum so tracking restarts from the new error regime.
        best_ = current_score();
        best_mean_ = dist_mean_;
        best_std_ = (best_ - dist_mean_) / 2.0;
      }
    }
  }
  return result;
}

void Eddm::reset() {
  t_ = 0;
  error_count_ = 0;
  last_error_index_.reset();
  dist_count_ = 0;
  dist_mean_ = 0.0;
  dist_m2_ = 0.0;
  best_ = 0.0;
  best_mean_ = 0.0;
  best_std_ = 0.0;
}

const char* to_string(RateKind kind) {
  switch (kind) {
    case RateKind::TPR: return "tpr";
    case RateKind::TNR: return "tnr";
    case RateKind::PPV: return "ppv";
    case RateKind::NPV: return "npv";
  }
  return "?";
}

std::map<RateKind, double> rates_from_confusion(std::int64_t tn, std::int64_t fp,
                                                std::int64_t fn, std::int64_t tp) {
  if (tn < 0 || fp < 0 || fn < 0 || tp < 0) {
    throw InvalidInput("rates_from_confusion: negative count");
  }
  std::map<RateKind, double> rates;
  if (tp + fn > 0) rates[RateKind::TPR] = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tn + fp > 0) rates[RateKind::TNR] = static_cast<double>(tn) / static_cast<double>(tn + fp);
  if (tp + fp > 0) rates[RateKind::PPV] = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tn + fn > 0) rates[RateKind::NPV] = static_cast<double>(tn) / static_cast<double>(tn + fn);
  return rates;
}

Hlnr::Hlnr(const std::map<RateKind, double>& baselines, HlnrConfig config)
    : config_(config), baselines_(baselines) {
  if (config_.eta0 <= 0.0 || config_.eta0 >= 1.0) throw InvalidInput("Hlnr: eta0 must be in (0,1)");
  if (baselines_.empty()) throw InvalidInput("Hlnr: no baseline rates");
  for (const auto& [kind, rate] : baselines_) {
    if (rate < 0.0 || rate > 1.0) throw InvalidInput("Hlnr: baseline rate out of [0,1]");
    rates_[kind] = rate;
    decays_[kind] = config_.eta0;
  }
}

void Hlnr::update_rate(RateKind kind, double indicator, std::vector<RateKind>& alarms) {
  auto it = rates_.find(kind);
  if (it == rates_.end()) return;  // rate not monitored (zero denominator at training time)
  const double prev = it->second;
  const double eta = decays_[kind];
  const double next = eta * prev + (1.0 - eta) * indicator;
  const double diff = next - prev;
  double next_eta;
  if (next >= prev) {
    next_eta = (eta - 1.0) * std::exp(-diff) + 1.0;
  } else {
    next_eta = (1.0 - eta) * std::exp(diff) + (2.0 * eta - 1.0);
  }
  it->second = next;
  decays_[kind] = next_eta;
  if (next < baselines_.at(kind) - config_.delta_alarm) alarms.push_back(kind);
}

std::vector<RateKind> Hlnr::update(ConfusionOutcome outcome) {
  std::vector<RateKind> alarms;
  switch (outcome) {
    case ConfusionOutcome::TP:
      update_rate(RateKind::TPR, 1.0, alarms);
      update_rate(RateKind::PPV, 1.0, alarms);
      break;
    case ConfusionOutcome::FN:
      update_rate(RateKind::TPR, 0.0, alarms);
      update_rate(RateKind::NPV, 0.0, alarms);
      break;
    case ConfusionOutcome::TN:
      update_rate(RateKind::TNR, 1.0, alarms);
      update_rate(RateKind::NPV, 1.0, alarms);
      break;
    case ConfusionOutcome::FP:
      update_rate(RateKind::TNR, 0.0, alarms);
      update_rate(RateKind::PPV, 0.0, alarms);
      break;
  }
  return alarms;
}

void Hlnr::reset() {
  for (auto& [kind, rate] : rates_) rate = baselines_.at(kind);
  for (auto& [kind, eta] : decays_) eta = config_.eta0;
}

double Hlnr::rate(RateKind kind) const { return rates_.at(kind); }
double Hlnr::decay(RateKind kind) const { return decays_.at(kind); }

}  // namespace driftwatch
