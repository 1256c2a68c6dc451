#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace driftwatch {

/// Equal-width binning configuration. 20 bins is the usual choice for the
/// non-intersection (covariate) distance, 10 for the stability index.
struct BinningSpec {
  std::size_t bin_count = 20;
};

/// Cut points for equal-width bins. `cuts` has bin_count - 1 strictly
/// increasing entries; the first and last bins are open-ended, so any real
/// value maps to some bin.
struct BinEdges {
  std::vector<double> cuts;

  std::size_t bin_count() const { return cuts.size() + 1; }
  /// Bin index for a value under the open-ended edge policy.
  std::size_t bin_index(double value) const;
  /// Human-readable interval labels, one per bin.
  std::vector<std::string> labels() const;
};

/// Binned relative-frequency distribution. `freqs` sums to 1 when count > 0.
/// `flagged` marks degenerate cases (empty input, zero-width range).
struct Histogram {
  std::vector<std::string> labels;
  std::vector<double> freqs;
  std::size_t count = 0;
  bool flagged = false;

  std::size_t size() const { return freqs.size(); }
};

/// Fit equal-width bin edges spanning [min(values), max(values)].
/// Throws EmptyInput, AllValuesIdentical (zero-width range), InvalidInput
/// (non-finite values or bin_count < 2).
BinEdges fit_binning(std::span<const double> values, const BinningSpec& spec);

/// Relative-frequency histogram of `values` over frozen edges. Values outside
/// the fitted range land in the open-ended edge bins. An empty input yields a
/// flagged all-zero histogram.
Histogram histogram(std::span<const double> values, const BinEdges& edges);

/// One bin per vocabulary entry plus a trailing OTHER bin for unseen labels.
Histogram categorical_histogram(std::span<const std::string> values,
                                std::span<const std::string> vocabulary);

inline constexpr const char* kOtherLabel = "__other__";

/// Additive smoothing: every frequency becomes (f + eps) / (1 + k*eps), so no
/// bin is exactly zero and log-based metrics stay defined.
Histogram smooth(const Histogram& h, double epsilon = 1e-4);

}  // namespace driftwatch
