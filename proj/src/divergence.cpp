#include "driftwatch/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

void check_same_labels(const Histogram& p, const Histogram& q) {
  if (p.labels != q.labels || p.freqs.size() != q.freqs.size()) {
    throw LabelMismatch();
  }
}

// Midpoint-quantile with linear interpolation on the sorted sample.
double quantile_sorted(std::span<const double> sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

const char* to_string(DriftLevel level) {
  switch (level) {
    case DriftLevel::NonExistent: return "non_existent";
    case DriftLevel::Low: return "low";
    case DriftLevel::Medium: return "medium";
    case DriftLevel::High: return "high";
  }
  return "?";
}

const char* to_string(StabilityLevel level) {
  switch (level) {
    case StabilityLevel::VerySlight: return "very_slight";
    case StabilityLevel::NotSignificant: return "not_significant";
    case StabilityLevel::Significant: return "significant";
  }
  return "?";
}

double kl_divergence(const Histogram& p, const Histogram& q) {
  check_same_labels(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    if (p.freqs[i] == 0.0) continue;
    if (q.freqs[i] == 0.0) throw ZeroBin("kl_divergence: zero bin in q");
    sum += p.freqs[i] * std::log(p.freqs[i] / q.freqs[i]);
  }
  return std::max(sum, 0.0);
}

double covariate_drift(const Histogram& p, const Histogram& q) {
  check_same_labels(p, q);
  double intersection = 0.0;
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    intersection += std::min(p.freqs[i], q.freqs[i]);
  }
  return std::clamp(1.0 - intersection, 0.0, 1.0);
}

DriftLevel classify_covariate_drift(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw OutOfRange("classify_covariate_drift: d must be in [0,1]");
  if (d > 0.4) return DriftLevel::High;
  if (d > 0.3) return DriftLevel::Medium;
  if (d > 0.2) return DriftLevel::Low;
  return DriftLevel::NonExistent;
}

double stability_index(const Histogram& p, const Histogram& q) {
  check_same_labels(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    if (p.freqs[i] == 0.0 || q.freqs[i] == 0.0) {
      throw ZeroBin("stability_index: zero bin, smooth both histograms first");
    }
    sum += (p.freqs[i] - q.freqs[i]) * std::log(p.freqs[i] / q.freqs[i]);
  }
  return std::max(sum, 0.0);
}

StabilityLevel classify_stability(double si) {
  if (si < 0.0) throw InvalidInput("classify_stability: si must be non-negative");
  if (si > 0.2) return StabilityLevel::Significant;
  if (si >= 0.1) return StabilityLevel::NotSignificant;
  return StabilityLevel::VerySlight;
}

double js_divergence(const Histogram& p, const Histogram& q) {
  check_same_labels(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    const double m = 0.5 * (p.freqs[i] + q.freqs[i]);
    if (p.freqs[i] > 0.0) sum += 0.5 * p.freqs[i] * std::log2(p.freqs[i] / m);
    if (q.freqs[i] > 0.0) sum += 0.5 * q.freqs[i] * std::log2(q.freqs[i] / m);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double js_distance(const Histogram& p, const Histogram& q) {
  return std::sqrt(js_divergence(p, q));
}

double wasserstein_1d(std::span<const double> x, std::span<const double> y, bool normalized) {
  if (x.empty() || y.empty()) throw EmptyInput("wasserstein_1d: empty sample");
  if (x.size() != y.size()) throw LengthMismatch("wasserstein_1d: samples differ in length");
  if (!std::is_sorted(x.begin(), x.end()) || !std::is_sorted(y.begin(), y.end())) {
    throw InvalidInput("wasserstein_1d: samples must be sorted ascending");
  }
  double w = 0.0;
  double emd = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w += x[i] - y[i];
    emd += std::abs(w);
  }
  if (normalized) emd /= static_cast<double>(x.size());
  return emd;
}

double wasserstein_resampled(std::span<const double> x, std::span<const double> y,
                             std::size_t grid_points, bool normalized) {
  if (x.empty() || y.empty()) throw EmptyInput("wasserstein_resampled: empty sample");
  const std::size_t n = grid_points ? grid_points : std::max(x.size(), y.size());
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::vector<double> gx(n), gy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = (n == 1) ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    gx[i] = quantile_sorted(xs, q);
    gy[i] = quantile_sorted(ys, q);
  }
  return wasserstein_1d(gx, gy, normalized);
}

double ks_statistic(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw EmptyInput("ks_statistic: empty sample");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double t = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= t) ++i;
    while (j < ys.size() && ys[j] <= t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return std::clamp(sup, 0.0, 1.0);
}

std::vector<KsReport> ks_class_separation(std::span<const double> feature,
                                          std::span<const std::string> labels,
                                          const std::vector<KsReport>* reference) {
  if (feature.empty()) throw EmptyInput("ks_class_separation: empty feature");
  if (feature.size() != labels.size()) throw LengthMismatch("ks_class_separation: size mismatch");
  std::map<std::string, std::vector<double>> by_class;
  for (std::size_t i = 0; i < feature.size(); ++i) by_class[labels[i]].push_back(feature[i]);
  if (by_class.size() < 2) throw SingleClass();

  std::vector<KsReport> out;
  for (auto a = by_class.begin(); a != by_class.end(); ++a) {
    for (auto b = std::next(a); b != by_class.end(); ++b) {
      KsReport r;
      r.group_pair = a->first + " vs " + b->first;
      r.statistic = ks_statistic(a->second, b->second);
      if (reference != nullptr) {
        for (const auto& ref : *reference) {
          if (ref.group_pair == r.group_pair) {
            r.separation_change = std::abs(r.statistic - ref.statistic);
            break;
          }
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace driftwatch
