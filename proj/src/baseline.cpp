#include "driftwatch/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "driftwatch/errors.hpp"

namespace driftwatch {

using nlohmann::json;

namespace {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string checksum_of(const json& snapshot_doc) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(snapshot_doc.dump())));
  return buf;
}

json histogram_to_json(const Histogram& h) {
  return json{{"labels", h.labels}, {"freqs", h.freqs}, {"count", h.count}, {"flagged", h.flagged}};
}

Histogram histogram_from_json(const json& j) {
  Histogram h;
  h.labels = j.at("labels").get<std::vector<std::string>>();
  h.freqs = j.at("freqs").get<std::vector<double>>();
  h.count = j.at("count").get<std::size_t>();
  h.flagged = j.at("flagged").get<bool>();
  return h;
}

json view_to_json(const BinnedView& v) {
  return json{{"cuts", v.edges.cuts}, {"histogram", histogram_to_json(v.hist)}};
}

BinnedView view_from_json(const json& j) {
  BinnedView v;
  v.edges.cuts = j.at("cuts").get<std::vector<double>>();
  v.hist = histogram_from_json(j.at("histogram"));
  return v;
}

json feature_to_json(const FeatureBaseline& f) {
  json j{{"name", f.schema.name},
         {"kind", to_string(f.schema.kind)},
         {"role", to_string(f.schema.role)},
         {"missing_rate", f.missing_rate},
         {"degenerate", f.degenerate}};
  if (f.covariate) j["covariate"] = view_to_json(*f.covariate);
  if (f.stability) j["stability"] = view_to_json(*f.stability);
  if (!f.quantiles.empty()) j["quantiles"] = f.quantiles;
  if (!f.vocabulary.empty()) j["vocabulary"] = f.vocabulary;
  if (f.categorical_hist) j["categorical_histogram"] = histogram_to_json(*f.categorical_hist);
  if (!f.class_separation.empty()) {
    json pairs = json::array();
    for (const auto& r : f.class_separation) {
      pairs.push_back({{"pair", r.group_pair}, {"statistic", r.statistic}});
    }
    j["class_separation"] = pairs;
  }
  return j;
}

FeatureBaseline feature_from_json(const json& j) {
  FeatureBaseline f;
  f.schema.name = j.at("name").get<std::string>();
  f.schema.kind = feature_kind_from_string(j.at("kind").get<std::string>());
  f.schema.role = feature_role_from_string(j.at("role").get<std::string>());
  f.missing_rate = j.at("missing_rate").get<double>();
  f.degenerate = j.at("degenerate").get<bool>();
  if (j.contains("covariate")) f.covariate = view_from_json(j.at("covariate"));
  if (j.contains("stability")) f.stability = view_from_json(j.at("stability"));
  if (j.contains("quantiles")) f.quantiles = j.at("quantiles").get<std::vector<double>>();
  if (j.contains("vocabulary")) f.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  if (j.contains("categorical_histogram")) {
    f.categorical_hist = histogram_from_json(j.at("categorical_histogram"));
  }
  if (j.contains("class_separation")) {
    for (const auto& p : j.at("class_separation")) {
      KsReport r;
      r.group_pair = p.at("pair").get<std::string>();
      r.statistic = p.at("statistic").get<double>();
      f.class_separation.push_back(std::move(r));
    }
  }
  return f;
}

json snapshot_to_json(const BaselineSnapshot& s) {
  json j{{"created_at", s.created_at}};
  json feats = json::array();
  for (const auto& f : s.features) feats.push_back(feature_to_json(f));
  j["features"] = feats;
  if (s.error_mean) j["error_mean"] = *s.error_mean;
  if (s.error_stddev) j["error_stddev"] = *s.error_stddev;
  if (s.confusion) {
    j["confusion"] = {{"tn", s.confusion->tn},
                      {"fp", s.confusion->fp},
                      {"fn", s.confusion->fn},
                      {"tp", s.confusion->tp}};
  }
  if (s.brier) j["brier"] = *s.brier;
  return j;
}

BaselineSnapshot snapshot_from_json(const json& j) {
  BaselineSnapshot s;
  s.created_at = j.at("created_at").get<std::string>();
  for (const auto& f : j.at("features")) s.features.push_back(feature_from_json(f));
  if (j.contains("error_mean")) s.error_mean = j.at("error_mean").get<double>();
  if (j.contains("error_stddev")) s.error_stddev = j.at("error_stddev").get<double>();
  if (j.contains("confusion")) {
    ConfusionCounts c;
    c.tn = j.at("confusion").at("tn").get<std::int64_t>();
    c.fp = j.at("confusion").at("fp").get<std::int64_t>();
    c.fn = j.at("confusion").at("fn").get<std::int64_t>();
    c.tp = j.at("confusion").at("tp").get<std::int64_t>();
    s.confusion = c;
  }
  if (j.contains("brier")) s.brier = j.at("brier").get<double>();
  return s;
}

struct NumericColumn {
  std::vector<double> values;  // finite only
  std::vector<bool> present;   // per row
  std::size_t missing = 0;
};

NumericColumn parse_column(const Table& t, std::size_t col) {
  NumericColumn out;
  out.present.resize(t.row_count(), false);
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    const double v = parse_numeric(t.cells[col][r], r + 2);
    if (std::isnan(v)) {
      ++out.missing;
    } else {
      out.values.push_back(v);
      out.present[r] = true;
    }
  }
  return out;
}

}  // namespace

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::Numeric ? "numeric" : "categorical";
}

const char* to_string(FeatureRole role) {
  switch (role) {
    case FeatureRole::Predictor: return "predictor";
    case FeatureRole::Target: return "target";
    case FeatureRole::Prediction: return "prediction";
    case FeatureRole::Probability: return "probability";
    case FeatureRole::Ignore: return "ignore";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::Numeric;
  if (s == "categorical") return FeatureKind::Categorical;
  throw SchemaMismatch("unknown feature kind '" + s + "'");
}

FeatureRole feature_role_from_string(const std::string& s) {
  if (s == "predictor") return FeatureRole::Predictor;
  if (s == "target") return FeatureRole::Target;
  if (s == "prediction") return FeatureRole::Prediction;
  if (s == "probability") return FeatureRole::Probability;
  if (s == "ignore") return FeatureRole::Ignore;
  throw SchemaMismatch("unknown feature role '" + s + "'");
}

const FeatureBaseline* BaselineSnapshot::find_feature(const std::string& name) const {
  for (const auto& f : features) {
    if (f.schema.name == name) return &f;
  }
  return nullptr;
}

BaselineSnapshot build_baseline(const Table& dataset, const std::vector<FeatureSchema>& schema,
                                const BaselineConfig& config) {
  if (dataset.row_count() == 0) throw EmptyInput("build_baseline: empty dataset");

  const FeatureSchema* target = nullptr;
  const FeatureSchema* prediction = nullptr;
  const FeatureSchema* probability = nullptr;
  for (const auto& f : schema) {
    dataset.column_index(f.name);  // throws SchemaMismatch if absent
    if (f.role == FeatureRole::Target) {
      if (target != nullptr) throw SchemaMismatch("more than one target column");
      target = &f;
    } else if (f.role == FeatureRole::Prediction) {
      prediction = &f;
    } else if (f.role == FeatureRole::Probability) {
      probability = &f;
    }
  }
  if (probability != nullptr && target == nullptr) {
    throw SchemaMismatch("probability role requires a target column");
  }

  const std::size_t rows = dataset.row_count();
  std::vector<std::string> target_labels;
  if (target != nullptr) {
    target_labels = dataset.cells[dataset.column_index(target->name)];
  }

  BaselineSnapshot snap;
  snap.created_at = config.created_at;

  for (const auto& f : schema) {
    if (f.role == FeatureRole::Ignore) continue;
    FeatureBaseline fb;
    fb.schema = f;
    const std::size_t col = dataset.column_index(f.name);

    if (f.kind == FeatureKind::Categorical) {
      std::vector<std::string> values;
      std::set<std::string> vocab;
      for (std::size_t r = 0; r < rows; ++r) {
        const std::string& cell = dataset.cells[col][r];
        if (cell.empty()) {
          fb.missing_rate += 1.0;
          continue;
        }
        values.push_back(cell);
        vocab.insert(cell);
      }
      fb.missing_rate /= static_cast<double>(rows);
      if (vocab.empty()) {
        fb.degenerate = true;
      } else {
        fb.vocabulary.assign(vocab.begin(), vocab.end());
        fb.categorical_hist = categorical_histogram(values, fb.vocabulary);
      }
      snap.features.push_back(std::move(fb));
      continue;
    }

    NumericColumn column = parse_column(dataset, col);
    fb.missing_rate = static_cast<double>(column.missing) / static_cast<double>(rows);
    if (f.role == FeatureRole::Predictor) {
      try {
        BinnedView cov;
        cov.edges = fit_binning(column.values, {.bin_count = config.bin_count_covariate});
        cov.hist = histogram(column.values, cov.edges);
        BinnedView stab;
        stab.edges = fit_binning(column.values, {.bin_count = config.bin_count_stability});
        stab.hist = histogram(column.values, stab.edges);
        fb.covariate = std::move(cov);
        fb.stability = std::move(stab);

        std::vector<double> sorted = column.values;
        std::sort(sorted.begin(), sorted.end());
        fb.quantiles.reserve(config.quantile_points);
        for (std::size_t i = 0; i < config.quantile_points; ++i) {
          const double q = static_cast<double>(i) / static_cast<double>(config.quantile_points - 1);
          const double pos = q * static_cast<double>(sorted.size() - 1);
          const auto lo = static_cast<std::size_t>(pos);
          const auto hi = std::min(lo + 1, sorted.size() - 1);
          const double frac = pos - static_cast<double>(lo);
          fb.quantiles.push_back(sorted[lo] * (1.0 - frac) + sorted[hi] * frac);
        }

        if (target != nullptr) {
          std::vector<double> feat;
          std::vector<std::string> labels;
          std::size_t vi = 0;
          for (std::size_t r = 0; r < rows; ++r) {
            if (!column.present[r]) continue;
            const double v = column.values[vi++];
            if (target_labels[r].empty()) continue;
            feat.push_back(v);
            labels.push_back(target_labels[r]);
          }
          std::set<std::string> classes(labels.begin(), labels.end());
          if (classes.size() >= 2) {
            fb.class_separation = ks_class_separation(feat, labels);
          }
        }
      } catch (const AllValuesIdentical&) {
        fb.degenerate = true;
      } catch (const EmptyInput&) {
        fb.degenerate = true;
      }
    }
    snap.features.push_back(std::move(fb));
  }

  if (target != nullptr && prediction != nullptr) {
    NumericColumn y = parse_column(dataset, dataset.column_index(target->name));
    NumericColumn yhat = parse_column(dataset, dataset.column_index(prediction->name));
    std::vector<double> residuals;
    bool binary = true;
    ConfusionCounts counts;
    std::vector<double> ys, yhats;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!y.present[r] || !yhat.present[r]) continue;
      double yv = 0.0, pv = 0.0;
      // Re-parse by row to keep the two columns aligned.
      yv = parse_numeric(dataset.cells[dataset.column_index(target->name)][r], r + 2);
      pv = parse_numeric(dataset.cells[dataset.column_index(prediction->name)][r], r + 2);
      residuals.push_back(yv - pv);
      ys.push_back(yv);
      yhats.push_back(pv);
      if ((yv != 0.0 && yv != 1.0) || (pv != 0.0 && pv != 1.0)) binary = false;
    }
    if (!residuals.empty()) {
      double mean = 0.0;
      for (double r : residuals) mean += r;
      mean /= static_cast<double>(residuals.size());
      double var = 0.0;
      for (double r : residuals) var += (r - mean) * (r - mean);
      var /= static_cast<double>(residuals.size());
      snap.error_mean = mean;
      snap.error_stddev = std::sqrt(var);
      if (binary) {
        for (std::size_t i = 0; i < ys.size(); ++i) {
          if (ys[i] == 1.0) {
            (yhats[i] == 1.0) ? ++counts.tp : ++counts.fn;
          } else {
            (yhats[i] == 0.0) ? ++counts.tn : ++counts.fp;
          }
        }
        snap.confusion = counts;
      }
    }
  }

  if (target != nullptr && probability != nullptr) {
    NumericColumn y = parse_column(dataset, dataset.column_index(target->name));
    NumericColumn p = parse_column(dataset, dataset.column_index(probability->name));
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!y.present[r] || !p.present[r]) continue;
      const double yv = parse_numeric(dataset.cells[dataset.column_index(target->name)][r], r + 2);
      const double pv = parse_numeric(dataset.cells[dataset.column_index(probability->name)][r], r + 2);
      if (yv != 0.0 && yv != 1.0) throw SchemaMismatch("probability role requires a binary target");
      sum += (yv - pv) * (yv - pv);
      ++n;
    }
    if (n > 0) snap.brier = sum / static_cast<double>(n);
  }

  return snap;
}

std::string serialize_baseline(const BaselineSnapshot& snapshot) {
  json snap = snapshot_to_json(snapshot);
  json doc{{"format_version", snapshot.format_version},
           {"checksum", checksum_of(snap)},
           {"snapshot", snap}};
  return doc.dump(2) + "\n";
}

BaselineSnapshot deserialize_baseline(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptSnapshot(std::string("baseline is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != 1) {
      throw VersionUnsupported("unsupported baseline format_version " + std::to_string(version));
    }
    const json& snap = doc.at("snapshot");
    if (doc.at("checksum").get<std::string>() != checksum_of(snap)) {
      throw CorruptSnapshot("baseline checksum mismatch");
    }
    BaselineSnapshot s = snapshot_from_json(snap);
    s.format_version = version;
    return s;
  } catch (const json::exception& e) {
    throw CorruptSnapshot(std::string("baseline missing required field: ") + e.what());
  }
}

void save_baseline(const BaselineSnapshot& snapshot, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + path + "'");
  out << serialize_baseline(snapshot);
  if (!out) throw IoFailure("write failed for '" + path + "'");
}

BaselineSnapshot load_baseline(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_baseline(buf.str());
}

}  // namespace driftwatch
