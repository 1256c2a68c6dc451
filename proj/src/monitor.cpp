#include "driftwatch/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "driftwatch/divergence.hpp"
#include "driftwatch/errors.hpp"

namespace driftwatch {

using nlohmann::json;

namespace {

std::string label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v.get<double>());
  return buf;
}

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

Monitor::Monitor(BaselineSnapshot baseline, RunConfig config)
    : baseline_(std::move(baseline)), config_(std::move(config)) {
  config_.validate();
  classification_ = baseline_.confusion.has_value();

  if (config_.ph_lambda) {
    ph_lambda_ = *config_.ph_lambda;
  } else if (baseline_.error_stddev && *baseline_.error_stddev > 0.0) {
    // Recommendation: scale the alarm threshold from the training error spread.
    ph_lambda_ = 50.0 * *baseline_.error_stddev;
  }

  for (const auto& fb : baseline_.features) {
    if (fb.schema.role != FeatureRole::Predictor || fb.degenerate) continue;
    MonitoredFeature mf;
    mf.fb = &fb;
    if (fb.schema.kind == FeatureKind::Numeric) {
      if (!fb.covariate || !fb.stability) continue;
      mf.stability_smoothed = smooth(fb.stability->hist, config_.epsilon);
    } else {
      if (!fb.categorical_hist) continue;
      mf.categorical_smoothed = smooth(*fb.categorical_hist, config_.epsilon);
    }
    monitored_.push_back(std::move(mf));
    window_[fb.schema.name] = {};
  }

  const bool concept_possible = classification_ || baseline_.error_stddev.has_value();
  if (config_.enable_page_hinkley && concept_possible) {
    ph_increase_ = PageHinkley({.alpha = config_.ph_alpha, .lambda = ph_lambda_,
                                .direction = PhDirection::Increase});
    ph_decrease_ = PageHinkley({.alpha = config_.ph_alpha, .lambda = ph_lambda_,
                                .direction = PhDirection::Decrease});
  }
  if (config_.enable_eddm && classification_) {
    eddm_ = Eddm({.warmup_min_errors = config_.eddm_warmup});
  }
  if (config_.enable_hlnr && classification_) {
    const auto& c = *baseline_.confusion;
    auto rates = rates_from_confusion(c.tn, c.fp, c.fn, c.tp);
    if (!rates.empty()) {
      hlnr_ = Hlnr(rates, {.eta0 = config_.eta0, .delta_alarm = config_.delta_alarm});
    }
  }

  auto make_chart = [this](const std::string& base) {
    ControlChart chart = default_chart_for(base, ph_lambda_);
    auto it = config_.chart_upper.find(base);
    if (it != config_.chart_upper.end()) chart.upper_limit = it->second;
    chart.trend_k = config_.trend_k;
    return chart;
  };
  charts_["covariate_drift"] = make_chart("covariate_drift");
  charts_["stability_index"] = make_chart("stability_index");
  charts_["eddm"] = make_chart("eddm");
  charts_["page_hinkley"] = make_chart("page_hinkley");

  reset_window();
}

void Monitor::reset_window() {
  for (auto& [name, fw] : window_) fw = {};
  window_brier_.clear();
  window_hlnr_alarms_.clear();
  window_records_ = 0;
  window_skipped_ = 0;
  window_first_record_ = total_records_;
}

MetricSeries& Monitor::series_for(const std::string& id) {
  auto it = series_.find(id);
  if (it == series_.end()) it = series_.emplace(id, MetricSeries{.metric_id = id}).first;
  return it->second;
}

ChartStatus Monitor::evaluate_series(const std::string& id, const ControlChart& chart) {
  return evaluate(chart, series_for(id));
}

std::optional<std::string> Monitor::ingest_line(const std::string& line) {
  // Stage everything first so a malformed record leaves no trace.
  struct Staged {
    std::map<std::string, std::optional<double>> numeric;        // nullopt = missing
    std::map<std::string, std::optional<std::string>> categorical;
    std::optional<double> y_true, y_pred, y_prob;
    std::optional<std::string> y_true_label;
  } staged;

  try {
    const json rec = json::parse(line);
    if (!rec.is_object()) throw ParseFailure("record is not a JSON object");
    for (const auto& mf : monitored_) {
      const std::string& name = mf.fb->schema.name;
      if (!rec.contains(name) || rec.at(name).is_null()) {
        if (mf.fb->schema.kind == FeatureKind::Numeric) staged.numeric[name] = std::nullopt;
        else staged.categorical[name] = std::nullopt;
        continue;
      }
      const json& v = rec.at(name);
      if (mf.fb->schema.kind == FeatureKind::Numeric) {
        if (!v.is_number()) throw ParseFailure("feature '" + name + "' is not a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
          staged.numeric[name] = std::nullopt;
        } else {
          staged.numeric[name] = d;
        }
      } else {
        if (!v.is_string()) throw ParseFailure("feature '" + name + "' is not a string");
        staged.categorical[name] = v.get<std::string>();
      }
    }
    if (rec.contains("y_true") && !rec.at("y_true").is_null()) {
      staged.y_true_label = label_of(rec.at("y_true"));
      if (rec.at("y_true").is_number()) staged.y_true = rec.at("y_true").get<double>();
    }
    if (rec.contains("y_pred") && !rec.at("y_pred").is_null() && rec.at("y_pred").is_number()) {
      staged.y_pred = rec.at("y_pred").get<double>();
    }
    if (rec.contains("y_prob") && !rec.at("y_prob").is_null()) {
      if (!rec.at("y_prob").is_number()) throw ParseFailure("y_prob is not a number");
      staged.y_prob = rec.at("y_prob").get<double>();
      if (*staged.y_prob < 0.0 || *staged.y_prob > 1.0) {
        throw ParseFailure("y_prob out of [0,1]");
      }
    }
    if (classification_ && staged.y_true && staged.y_pred &&
        (!is_binary(*staged.y_true) || !is_binary(*staged.y_pred))) {
      throw ParseFailure("classification labels must be 0 or 1");
    }
  } catch (const json::exception& e) {
    if (config_.strict) throw ParseFailure(std::string("malformed record: ") + e.what());
    ++total_skipped_;
    ++window_skipped_;
    return std::nullopt;
  } catch (const ParseFailure& e) {
    if (config_.strict) throw;
    ++total_skipped_;
    ++window_skipped_;
    return std::nullopt;
  }

  // Commit to the window.
  for (const auto& [name, value] : staged.numeric) {
    auto& fw = window_[name];
    if (value) {
      fw.numeric.push_back(*value);
      if (staged.y_true_label) {
        fw.labeled_values.push_back(*value);
        fw.labeled_classes.push_back(*staged.y_true_label);
      }
    } else {
      ++fw.missing;
    }
  }
  for (const auto& [name, value] : staged.categorical) {
    auto& fw = window_[name];
    if (value) fw.categorical.push_back(*value);
    else ++fw.missing;
  }

  if (staged.y_true && staged.y_pred) {
    const double error = classification_ ? (*staged.y_true != *staged.y_pred ? 1.0 : 0.0)
                                         : (*staged.y_true - *staged.y_pred);
    if (ph_increase_) last_ph_inc_ = ph_increase_->update(error);
    if (ph_decrease_) last_ph_dec_ = ph_decrease_->update(error);
    if (classification_) {
      const bool is_error = *staged.y_true != *staged.y_pred;
      if (eddm_) last_eddm_ = eddm_->update(is_error);
      if (hlnr_) {
        ConfusionOutcome outcome;
        if (*staged.y_true == 1.0) {
          outcome = (*staged.y_pred == 1.0) ? ConfusionOutcome::TP : ConfusionOutcome::FN;
        } else {
          outcome = (*staged.y_pred == 0.0) ? ConfusionOutcome::TN : ConfusionOutcome::FP;
        }
        for (RateKind kind : hlnr_->update(outcome)) {
          window_hlnr_alarms_.push_back(to_string(kind));
        }
      }
    }
  }
  if (config_.enable_brier && staged.y_prob && staged.y_true && is_binary(*staged.y_true)) {
    window_brier_.push_back({staged.y_true, staged.y_pred, staged.y_prob, total_records_});
  }

  ++total_records_;
  ++window_records_;
  if (window_records_ == config_.window_size) {
    std::string report = emit_window(false);
    ++window_index_;
    reset_window();
    return report;
  }
  return std::nullopt;
}

std::optional<std::string> Monitor::finish() {
  if (window_records_ == 0) return std::nullopt;
  std::string report = emit_window(true);
  ++window_index_;
  reset_window();
  return report;
}

std::string Monitor::emit_window(bool partial) {
  json rep;
  rep["report_version"] = 1;
  rep["window"] = window_index_;
  rep["first_record"] = window_first_record_;
  rep["last_record"] = total_records_ - 1;
  rep["record_count"] = window_records_;
  rep["partial"] = partial;
  rep["skipped_malformed"] = window_skipped_;

  json charts = json::object();
  ChartStatus verdict = ChartStatus::InControl;
  double max_cov = -1.0;
  double max_si = -1.0;

  json feats = json::object();
  for (const auto& mf : monitored_) {
    const FeatureBaseline& fb = *mf.fb;
    const std::string& name = fb.schema.name;
    const FeatureWindow& fw = window_.at(name);
    json f;
    f["kind"] = to_string(fb.schema.kind);
    const std::size_t observed =
        (fb.schema.kind == FeatureKind::Numeric) ? fw.numeric.size() : fw.categorical.size();
    f["missing_rate"] = (observed + fw.missing) == 0
                            ? 0.0
                            : static_cast<double>(fw.missing) / static_cast<double>(observed + fw.missing);
    if (observed == 0) {
      f["insufficient"] = true;
      feats[name] = f;
      continue;
    }

    Histogram window_cov_hist;
    Histogram window_stab_smoothed;
    const Histogram* baseline_cov_hist = nullptr;
    const Histogram* baseline_stab_smoothed = &mf.stability_smoothed;
    if (fb.schema.kind == FeatureKind::Numeric) {
      window_cov_hist = histogram(fw.numeric, fb.covariate->edges);
      baseline_cov_hist = &fb.covariate->hist;
      window_stab_smoothed = smooth(histogram(fw.numeric, fb.stability->edges), config_.epsilon);
    } else {
      window_cov_hist = categorical_histogram(fw.categorical, fb.vocabulary);
      baseline_cov_hist = &*fb.categorical_hist;
      window_stab_smoothed = smooth(window_cov_hist, config_.epsilon);
      baseline_stab_smoothed = &mf.categorical_smoothed;
    }

    if (config_.enable_covariate) {
      const double d = covariate_drift(*baseline_cov_hist, window_cov_hist);
      f["covariate_drift"] = d;
      f["drift_level"] = to_string(classify_covariate_drift(d));
      max_cov = std::max(max_cov, d);
      const std::string id = "covariate_drift/" + name;
      record(series_for(id), window_index_, d);
      const ChartStatus status = evaluate_series(id, charts_.at("covariate_drift"));
      charts[id] = to_string(status);
      verdict = worst(verdict, status);
    }
    if (config_.enable_stability) {
      const double si = stability_index(*baseline_stab_smoothed, window_stab_smoothed);
      f["stability_index"] = si;
      f["stability_level"] = to_string(classify_stability(si));
      max_si = std::max(max_si, si);
      const std::string id = "stability_index/" + name;
      record(series_for(id), window_index_, si);
      const ChartStatus status = evaluate_series(id, charts_.at("stability_index"));
      charts[id] = to_string(status);
      verdict = worst(verdict, status);
    }
    if (config_.enable_js) {
      f["js_distance"] = js_distance(*baseline_cov_hist, window_cov_hist);
    }
    if (config_.enable_wasserstein && fb.schema.kind == FeatureKind::Numeric &&
        !fb.quantiles.empty()) {
      f["wasserstein"] =
          wasserstein_resampled(fb.quantiles, fw.numeric, fb.quantiles.size(), true);
    }
    if (config_.enable_ks && fb.schema.kind == FeatureKind::Numeric &&
        !fb.class_separation.empty()) {
      std::set<std::string> classes(fw.labeled_classes.begin(), fw.labeled_classes.end());
      if (classes.size() >= 2) {
        auto reports = ks_class_separation(fw.labeled_values, fw.labeled_classes,
                                           &fb.class_separation);
        double max_delta = 0.0;
        bool any = false;
        for (const auto& r : reports) {
          if (r.separation_change) {
            max_delta = std::max(max_delta, *r.separation_change);
            any = true;
          }
        }
        if (any) f["ks_delta"] = max_delta;
      }
    }
    feats[name] = f;
  }
  rep["features"] = feats;

  if (max_cov >= 0.0) {
    record(series_for("covariate_drift/max"), window_index_, max_cov);
    const ChartStatus status = evaluate_series("covariate_drift/max", charts_.at("covariate_drift"));
    charts["covariate_drift/max"] = to_string(status);
    verdict = worst(verdict, status);
  }
  if (max_si >= 0.0) {
    record(series_for("stability_index/max"), window_index_, max_si);
    const ChartStatus status = evaluate_series("stability_index/max", charts_.at("stability_index"));
    charts["stability_index/max"] = to_string(status);
    verdict = worst(verdict, status);
  }

  json concept_doc = json::object();
  if (ph_increase_ && last_ph_inc_) {
    concept_doc["page_hinkley"] = {
        {"lambda", ph_lambda_},
        {"increase", {{"value", last_ph_inc_->ph}, {"alarm", last_ph_inc_->alarm}}},
        {"decrease", {{"value", last_ph_dec_->ph}, {"alarm", last_ph_dec_->alarm}}}};
    const std::string id = "page_hinkley";
    record(series_for(id), window_index_, last_ph_inc_->ph);
    const ChartStatus status = evaluate_series(id, charts_.at("page_hinkley"));
    charts[id] = to_string(status);
    verdict = worst(verdict, status);
  }
  if (config_.enable_brier && !window_brier_.empty()) {
    concept_doc["brier"] = brier_score(window_brier_);
  }
  if (eddm_ && last_eddm_) {
    json e;
    e["level"] = to_string(last_eddm_->level);
    if (last_eddm_->value) e["value"] = *last_eddm_->value;
    else e["value"] = nullptr;
    concept_doc["eddm"] = e;
    if (last_eddm_->value) {
      const std::string id = "eddm";
      record(series_for(id), window_index_, *last_eddm_->value);
      const ChartStatus status = evaluate_series(id, charts_.at("eddm"));
      charts[id] = to_string(status);
      verdict = worst(verdict, status);
    }
  }
  if (hlnr_) {
    json rates = json::object();
    json decays = json::object();
    for (RateKind kind : {RateKind::TPR, RateKind::TNR, RateKind::PPV, RateKind::NPV}) {
      if (hlnr_->baselines().count(kind) == 0) continue;
      rates[to_string(kind)] = hlnr_->rate(kind);
      decays[to_string(kind)] = hlnr_->decay(kind);
    }
    std::set<std::string> alarm_set(window_hlnr_alarms_.begin(), window_hlnr_alarms_.end());
    concept_doc["hlnr"] = {{"rates", rates},
                       {"decays", decays},
                       {"alarms", std::vector<std::string>(alarm_set.begin(), alarm_set.end())}};
  }
  rep["concept"] = concept_doc;

  rep["charts"] = charts;
  rep["verdict"] = to_string(verdict);
  worst_ = worst(worst_, verdict);
  return rep.dump();
}

std::string summarize_reports(std::istream& reports) {
  std::string line;
  std::size_t windows = 0;
  ChartStatus worst_verdict = ChartStatus::InControl;
  std::optional<std::int64_t> first_breach;
  std::map<std::string, std::pair<double, std::string>> latest_cov;

  while (std::getline(reports, line)) {
    if (line.empty()) continue;
    json rep;
    try {
      rep = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseFailure(std::string("bad report line: ") + e.what());
    }
    ++windows;
    const std::string verdict = rep.at("verdict").get<std::string>();
    ChartStatus status = ChartStatus::InControl;
    if (verdict == "trending") status = ChartStatus::Trending;
    if (verdict == "breach") status = ChartStatus::Breach;
    worst_verdict = worst(worst_verdict, status);
    if (status == ChartStatus::Breach && !first_breach) {
      first_breach = rep.at("window").get<std::int64_t>();
    }
    for (const auto& [name, f] : rep.at("features").items()) {
      if (f.contains("covariate_drift")) {
        latest_cov[name] = {f.at("covariate_drift").get<double>(),
                            f.value("drift_level", std::string("?"))};
      }
    }
  }
  if (windows == 0) throw EmptyInput("no report documents");

  std::vector<std::pair<std::string, std::pair<double, std::string>>> ranking(latest_cov.begin(),
                                                                              latest_cov.end());
  std::sort(ranking.begin(), ranking.end(),
            [](const auto& a, const auto& b) { return a.second.first > b.second.first; });

  json out;
  out["windows"] = windows;
  out["worst_verdict"] = to_string(worst_verdict);
  if (first_breach) out["first_breach_window"] = *first_breach;
  else out["first_breach_window"] = nullptr;
  json rank = json::array();
  for (const auto& [name, v] : ranking) {
    rank.push_back({{"feature", name}, {"covariate_drift", v.first}, {"drift_level", v.second}});
  }
  out["feature_ranking"] = rank;
  return out.dump(2);
}

int exit_code_for(ChartStatus status) {
  switch (status) {
    case ChartStatus::InControl: return 0;
    case ChartStatus::Trending: return 3;
    case ChartStatus::Breach: return 4;
  }
  return 0;
}

}  // namespace driftwatch
