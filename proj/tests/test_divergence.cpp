#include <cmath>
#include <random>

#include <doctest.h>

#include "driftwatch/divergence.hpp"
#include "driftwatch/errors.hpp"

using namespace driftwatch;

namespace {

Histogram make_hist(std::vector<double> freqs) {
  Histogram h;
  for (std::size_t i = 0; i < freqs.size(); ++i) h.labels.push_back("b" + std::to_string(i));
  h.freqs = std::move(freqs);
  h.count = 100;
  return h;
}

Histogram random_smoothed(std::mt19937& rng, std::size_t bins) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> f(bins);
  double sum = 0.0;
  for (auto& v : f) {
    v = unif(rng);
    sum += v;
  }
  for (auto& v : f) v /= sum;
  return smooth(make_hist(f), 1e-4);
}

}  // namespace

TEST_CASE("kl divergence matches hand-evaluated values and is asymmetric") {
  auto p = make_hist({0.5, 0.5});
  auto q = make_hist({0.9, 0.1});
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.5108256).epsilon(1e-6));
  CHECK(kl_divergence(q, p) == doctest::Approx(0.3680642).epsilon(1e-6));
  CHECK(kl_divergence(p, q) != kl_divergence(q, p));
}

TEST_CASE("kl divergence input validation") {
  auto p = make_hist({0.5, 0.5});
  auto zero = make_hist({1.0, 0.0});
  CHECK_THROWS_AS(kl_divergence(p, zero), ZeroBin);
  auto other = make_hist({0.5, 0.3, 0.2});
  CHECK_THROWS_AS(kl_divergence(p, other), LabelMismatch);
}

TEST_CASE("covariate drift is the non-intersection distance") {
  auto p = make_hist({0.5, 0.5});
  CHECK(covariate_drift(p, p) == doctest::Approx(0.0));
  CHECK(covariate_drift(make_hist({1.0, 0.0}), make_hist({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(covariate_drift(p, make_hist({0.8, 0.2})) == doctest::Approx(0.3));
}

TEST_CASE("covariate drift bands pin each boundary") {
  CHECK(classify_covariate_drift(0.41) == DriftLevel::High);
  CHECK(classify_covariate_drift(0.4) == DriftLevel::Medium);
  CHECK(classify_covariate_drift(0.31) == DriftLevel::Medium);
  CHECK(classify_covariate_drift(0.3) == DriftLevel::Low);
  CHECK(classify_covariate_drift(0.21) == DriftLevel::Low);
  CHECK(classify_covariate_drift(0.2) == DriftLevel::NonExistent);
  CHECK(classify_covariate_drift(0.0) == DriftLevel::NonExistent);
  CHECK_THROWS_AS(classify_covariate_drift(1.5), OutOfRange);
  CHECK_THROWS_AS(classify_covariate_drift(-0.1), OutOfRange);
}

TEST_CASE("stability index matches hand evaluation and decomposes into KL") {
  auto p = make_hist({0.6, 0.4});
  auto q = make_hist({0.5, 0.5});
  CHECK(stability_index(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stability_index(p, q) == doctest::Approx(0.0405465).epsilon(1e-6));
  CHECK(stability_index(p, q) == doctest::Approx(stability_index(q, p)).epsilon(1e-12));

  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto a = random_smoothed(rng, 2 + i % 20);
    std::mt19937 rng2(rng());
    auto b = random_smoothed(rng2, a.freqs.size());
    b.labels = a.labels;
    const double si = stability_index(a, b);
    CHECK(si >= 0.0);
    CHECK(si == doctest::Approx(kl_divergence(a, b) + kl_divergence(b, a)).epsilon(1e-12));
    CHECK(si == doctest::Approx(stability_index(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("stability bands use the corrected Significant reading") {
  CHECK(classify_stability(0.05) == StabilityLevel::VerySlight);
  CHECK(classify_stability(0.1) == StabilityLevel::NotSignificant);
  CHECK(classify_stability(0.15) == StabilityLevel::NotSignificant);
  CHECK(classify_stability(0.2) == StabilityLevel::NotSignificant);
  CHECK(classify_stability(0.25) == StabilityLevel::Significant);
  CHECK_THROWS_AS(classify_stability(-0.01), InvalidInput);
}

TEST_CASE("jensen-shannon distance with base-2 logs") {
  auto p = make_hist({0.5, 0.5});
  CHECK(js_distance(p, p) == doctest::Approx(0.0));
  CHECK(js_divergence(make_hist({1.0, 0.0}), make_hist({0.0, 1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(js_distance(make_hist({1.0, 0.0}), make_hist({0.0, 1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Hand evaluation: M = [0.625, 0.375], divergence 0.0487950, sqrt 0.2208959.
  CHECK(js_distance(p, make_hist({0.75, 0.25})) == doctest::Approx(0.2208959).epsilon(1e-6));
}

TEST_CASE("wasserstein recursion matches hand traces") {
  CHECK(wasserstein_1d(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) ==
        doctest::Approx(0.0));
  CHECK(wasserstein_1d(std::vector<double>{0}, std::vector<double>{1}) == doctest::Approx(1.0));
  CHECK(wasserstein_1d(std::vector<double>{0, 0}, std::vector<double>{1, 1}) ==
        doctest::Approx(3.0));
  CHECK(wasserstein_1d(std::vector<double>{0, 0}, std::vector<double>{1, 1}, true) ==
        doctest::Approx(1.5));
}

TEST_CASE("wasserstein input validation") {
  CHECK_THROWS_AS(wasserstein_1d(std::vector<double>{}, std::vector<double>{}), EmptyInput);
  CHECK_THROWS_AS(wasserstein_1d(std::vector<double>{1}, std::vector<double>{1, 2}),
                  LengthMismatch);
  CHECK_THROWS_AS(wasserstein_1d(std::vector<double>{2, 1}, std::vector<double>{1, 2}),
                  InvalidInput);
}

TEST_CASE("wasserstein equals the cumulative-sum L1 oracle") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(1, 100);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = unif(rng);
    for (auto& v : y) v = unif(rng);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    double cx = 0.0, cy = 0.0, oracle = 0.0;
    for (int i = 0; i < n; ++i) {
      cx += x[i];
      cy += y[i];
      oracle += std::abs(cx - cy);
    }
    CHECK(wasserstein_1d(x, y) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("wasserstein resampling handles unequal lengths") {
  std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> y{0, 2.5, 5, 7.5, 10};
  // Same underlying uniform shape, so the resampled distance is small.
  CHECK(wasserstein_resampled(x, y, 11, true) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ks statistic") {
  std::vector<double> x{1, 2, 3, 4};
  CHECK(ks_statistic(x, x) == doctest::Approx(0.0));
  CHECK(ks_statistic(std::vector<double>{0, 1}, std::vector<double>{10, 11}) ==
        doctest::Approx(1.0));
  CHECK(ks_statistic(x, std::vector<double>{3, 4, 5, 6}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, x), EmptyInput);
}

TEST_CASE("ks statistic agrees with a brute-force sup over pooled points") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(20), y(35);
    for (auto& v : x) v = unif(rng);
    for (auto& v : y) v = unif(rng);
    double sup = 0.0;
    std::vector<double> pool;
    pool.insert(pool.end(), x.begin(), x.end());
    pool.insert(pool.end(), y.begin(), y.end());
    for (double t : pool) {
      double fx = 0.0, fy = 0.0;
      for (double v : x) fx += (v <= t) ? 1.0 : 0.0;
      for (double v : y) fy += (v <= t) ? 1.0 : 0.0;
      sup = std::max(sup, std::abs(fx / x.size() - fy / y.size()));
    }
    CHECK(ks_statistic(x, y) == doctest::Approx(sup).epsilon(1e-12));
  }
}

TEST_CASE("class-conditioned ks separation") {
  std::vector<double> feature{1, 2, 3, 10, 11, 12};
  std::vector<std::string> labels{"a", "a", "a", "b", "b", "b"};
  auto reports = ks_class_separation(feature, labels);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].group_pair == "a vs b");
  CHECK(reports[0].statistic == doctest::Approx(1.0));

  // Identical conditioned samples.
  std::vector<double> same{1, 2, 1, 2};
  std::vector<std::string> same_labels{"a", "a", "b", "b"};
  auto r2 = ks_class_separation(same, same_labels);
  CHECK(r2[0].statistic == doctest::Approx(0.0));

  // Reference delta identity.
  auto r3 = ks_class_separation(feature, labels, &reports);
  REQUIRE(r3[0].separation_change.has_value());
  CHECK(*r3[0].separation_change == doctest::Approx(0.0));

  std::vector<std::string> single{"a", "a", "a", "a", "a", "a"};
  CHECK_THROWS_AS(ks_class_separation(feature, single), SingleClass);
}

TEST_CASE("identity, symmetry, and bounds over random histogram pairs") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_smoothed(rng, 2 + trial % 30);
    std::mt19937 rng2(rng());
    auto q = random_smoothed(rng2, p.freqs.size());
    q.labels = p.labels;

    CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(covariate_drift(p, p) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(js_distance(p, p) == doctest::Approx(0.0).epsilon(1e-12));

    const double d = covariate_drift(p, q);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d == doctest::Approx(covariate_drift(q, p)).epsilon(1e-12));

    const double jd = js_divergence(p, q);
    CHECK(jd >= 0.0);
    CHECK(jd <= 1.0);
    CHECK(js_distance(p, q) == doctest::Approx(js_distance(q, p)).epsilon(1e-12));
    CHECK(kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("classifiers are monotone in their metric") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    double a = unif(rng), b = unif(rng);
    if (a > b) std::swap(a, b);
    CHECK(static_cast<int>(classify_covariate_drift(a)) <=
          static_cast<int>(classify_covariate_drift(b)));
    CHECK(static_cast<int>(classify_stability(a)) <= static_cast<int>(classify_stability(b)));
  }
}
