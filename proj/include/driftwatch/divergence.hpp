#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/histogram.hpp"

namespace driftwatch {

enum class DriftLevel { NonExistent, Low, Medium, High };
enum class StabilityLevel { VerySlight, NotSignificant, Significant };

const char* to_string(DriftLevel level);
const char* to_string(StabilityLevel level);

/// Two-sample KS statistic for one pair of class-conditioned samples.
/// `separation_change` is filled when a training-time reference is available.
struct KsReport {
  std::string group_pair;
  double statistic = 0.0;
  std::optional<double> separation_change;
};

/// Discrete Kullback-Leibler divergence, natural log. q must have no zero
/// bins where p has mass (smooth first).
double kl_divergence(const Histogram& p, const Histogram& q);

/// Non-intersection distance: 1 - sum of bin-wise minima. In [0,1], symmetric.
double covariate_drift(const Histogram& p, const Histogram& q);

DriftLevel classify_covariate_drift(double d);

/// Symmetrized KL: KL(p|q) + KL(q|p). Both histograms must be smoothed.
double stability_index(const Histogram& p, const Histogram& q);

StabilityLevel classify_stability(double si);

/// Jensen-Shannon divergence against the equal mixture, base-2 logs so the
/// value lands in [0,1].
double js_divergence(const Histogram& p, const Histogram& q);

/// Square root of the Jensen-Shannon divergence.
double js_distance(const Histogram& p, const Histogram& q);

/// One-dimensional earth-mover distance via the prefix-difference recursion
/// w_i = x_{i-1} - y_{i-1} + w_{i-1}, EMD = sum |w_i|. Inputs must be sorted
/// ascending and of equal length. `normalized` divides by n for scale-free
/// monitoring.
double wasserstein_1d(std::span<const double> x, std::span<const double> y,
                      bool normalized = false);

/// Convenience wrapper for unequal-length samples: both sides are resampled
/// to a common quantile grid before applying the recursion.
double wasserstein_resampled(std::span<const double> x, std::span<const double> y,
                             std::size_t grid_points = 0, bool normalized = false);

/// Two-sample Kolmogorov-Smirnov statistic: sup_t |Fx(t) - Fy(t)|.
double ks_statistic(std::span<const double> x, std::span<const double> y);

/// KS statistic per class pair on class-conditioned samples of one feature.
/// When `reference` carries training-time reports, the absolute change in
/// separation is attached per matching pair.
std::vector<KsReport> ks_class_separation(
    std::span<const double> feature, std::span<const std::string> labels,
    const std::vector<KsReport>* reference = nullptr);

}  // namespace driftwatch
