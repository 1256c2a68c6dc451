#include "driftwatch/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

std::string format_cut(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::size_t BinEdges::bin_index(double value) const {
  // Half-open bins [c_{i-1}, c_i); outer bins unbounded.
  auto it = std::upper_bound(cuts.begin(), cuts.end(), value);
  return static_cast<std::size_t>(it - cuts.begin());
}

std::vector<std::string> BinEdges::labels() const {
  std::vector<std::string> out;
  out.reserve(bin_count());
  for (std::size_t i = 0; i < bin_count(); ++i) {
    std::string lo = (i == 0) ? "-inf" : format_cut(cuts[i - 1]);
    std::string hi = (i == cuts.size()) ? "+inf" : format_cut(cuts[i]);
    out.push_back("[" + lo + "," + hi + ")");
  }
  return out;
}

BinEdges fit_binning(std::span<const double> values, const BinningSpec& spec) {
  if (values.empty()) throw EmptyInput("fit_binning: no values");
  if (spec.bin_count < 2) throw InvalidInput("fit_binning: bin_count must be >= 2");
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("fit_binning: non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) throw AllValuesIdentical();
  BinEdges edges;
  edges.cuts.reserve(spec.bin_count - 1);
  const double width = (hi - lo) / static_cast<double>(spec.bin_count);
  for (std::size_t i = 1; i < spec.bin_count; ++i) {
    edges.cuts.push_back(lo + width * static_cast<double>(i));
  }
  return edges;
}

Histogram histogram(std::span<const double> values, const BinEdges& edges) {
  Histogram h;
  h.labels = edges.labels();
  h.freqs.assign(edges.bin_count(), 0.0);
  if (values.empty()) {
    h.flagged = true;
    return h;
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("histogram: non-finite value");
    h.freqs[edges.bin_index(v)] += 1.0;
  }
  h.count = values.size();
  const double n = static_cast<double>(h.count);
  for (double& f : h.freqs) f /= n;
  return h;
}

Histogram categorical_histogram(std::span<const std::string> values,
                                std::span<const std::string> vocabulary) {
  if (vocabulary.empty()) throw EmptyInput("categorical_histogram: empty vocabulary");
  Histogram h;
  h.labels.assign(vocabulary.begin(), vocabulary.end());
  h.labels.push_back(kOtherLabel);
  h.freqs.assign(h.labels.size(), 0.0);
  if (values.empty()) {
    h.flagged = true;
    return h;
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) index.emplace(vocabulary[i], i);
  for (const auto& v : values) {
    auto it = index.find(v);
    const std::size_t bin = (it == index.end()) ? vocabulary.size() : it->second;
    h.freqs[bin] += 1.0;
  }
  h.count = values.size();
  const double n = static_cast<double>(h.count);
  for (double& f : h.freqs) f /= n;
  return h;
}

Histogram smooth(const Histogram& h, double epsilon) {
  if (epsilon <= 0.0) throw InvalidInput("smooth: epsilon must be positive");
  Histogram out = h;
  const double k = static_cast<double>(h.freqs.size());
  const double denom = 1.0 + k * epsilon;
  for (std::size_t i = 0; i < out.freqs.size(); ++i) {
    out.freqs[i] = (h.freqs[i] + epsilon) / denom;
  }
  return out;
}

}  // namespace driftwatch
