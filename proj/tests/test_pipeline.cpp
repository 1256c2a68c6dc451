#include <cstdlib>
#include <random>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "driftwatch/baseline.hpp"
#include "driftwatch/config.hpp"
#include "driftwatch/errors.hpp"
#include "driftwatch/monitor.hpp"

using namespace driftwatch;
using nlohmann::json;

namespace {

BaselineSnapshot make_numeric_baseline(unsigned seed = 5, bool with_labels = false) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::ostringstream csv;
  csv << (with_labels ? "f1,y,yhat\n" : "f1\n");
  for (int i = 0; i < 5000; ++i) {
    csv << gauss(rng);
    if (with_labels) {
      const int y = i % 2;
      const int yhat = (i % 10 == 0) ? 1 - y : y;  // 10% training error
      csv << "," << y << "," << yhat;
    }
    csv << "\n";
  }
  std::istringstream in(csv.str());
  Table t = read_csv(in);
  std::vector<FeatureSchema> schema{{"f1", FeatureKind::Numeric, FeatureRole::Predictor}};
  if (with_labels) {
    schema.push_back({"y", FeatureKind::Numeric, FeatureRole::Target});
    schema.push_back({"yhat", FeatureKind::Numeric, FeatureRole::Prediction});
  }
  return build_baseline(t, schema, {});
}

std::string record_line(double f1, std::optional<int> y = {}, std::optional<int> yhat = {}) {
  json j{{"f1", f1}};
  if (y) j["y_true"] = *y;
  if (yhat) j["y_pred"] = *yhat;
  return j.dump();
}

}  // namespace

TEST_CASE("config parsing, validation, and env overrides") {
  auto cfg = parse_config(R"({"window_size": 100, "trend_k": 7, "chart_upper": {"covariate_drift": 0.3}})");
  CHECK(cfg.window_size == 100);
  CHECK(cfg.trend_k == 7);
  CHECK(cfg.chart_upper.at("covariate_drift") == doctest::Approx(0.3));

  CHECK_THROWS_AS(parse_config(R"({"nope": 1})"), ParseFailure);
  CHECK_THROWS_AS(parse_config(R"({"window_size": 0})"), InvalidInput);
  CHECK_THROWS_AS(parse_config("not json"), ParseFailure);

  setenv("DRIFTWATCH_WINDOW_SIZE", "42", 1);
  setenv("DRIFTWATCH_STRICT", "true", 1);
  apply_env_overrides(cfg);
  CHECK(cfg.window_size == 42);
  CHECK(cfg.strict);
  unsetenv("DRIFTWATCH_WINDOW_SIZE");
  unsetenv("DRIFTWATCH_STRICT");
}

TEST_CASE("monitor emits one report per full window plus a flagged partial") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 10;
  Monitor monitor(baseline, cfg);

  std::mt19937 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int reports = 0;
  for (int i = 0; i < 25; ++i) {
    if (auto rep = monitor.ingest_line(record_line(gauss(rng)))) {
      ++reports;
      auto j = json::parse(*rep);
      CHECK_FALSE(j.at("partial").get<bool>());
      CHECK(j.at("record_count").get<int>() == 10);
    }
  }
  CHECK(reports == 2);
  auto partial = monitor.finish();
  REQUIRE(partial.has_value());
  auto j = json::parse(*partial);
  CHECK(j.at("partial").get<bool>());
  CHECK(j.at("record_count").get<int>() == 5);
  CHECK(monitor.records_ingested() == 25);
}

TEST_CASE("malformed records are counted, skipped, and fatal under strict") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 5;
  Monitor monitor(baseline, cfg);
  CHECK_FALSE(monitor.ingest_line("this is not json").has_value());
  CHECK_FALSE(monitor.ingest_line(R"({"f1": "a string"})").has_value());
  for (int i = 0; i < 4; ++i) monitor.ingest_line(record_line(0.1 * i));
  auto rep = monitor.ingest_line(record_line(0.5));
  REQUIRE(rep.has_value());
  auto j = json::parse(*rep);
  CHECK(j.at("skipped_malformed").get<int>() == 2);
  CHECK(j.at("record_count").get<int>() == 5);
  CHECK(monitor.records_skipped() == 2);

  cfg.strict = true;
  Monitor strict_monitor(baseline, cfg);
  CHECK_THROWS_AS(strict_monitor.ingest_line("not json"), ParseFailure);
}

TEST_CASE("missing feature values are tracked as a missing rate") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 4;
  Monitor monitor(baseline, cfg);
  monitor.ingest_line(record_line(0.1));
  monitor.ingest_line(R"({"f1": null})");
  monitor.ingest_line(R"({})");
  auto rep = monitor.ingest_line(record_line(-0.2));
  REQUIRE(rep.has_value());
  auto j = json::parse(*rep);
  CHECK(j.at("features").at("f1").at("missing_rate").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("records without ground truth leave concept detectors untouched") {
  auto baseline = make_numeric_baseline(5, true);
  REQUIRE(baseline.confusion.has_value());
  RunConfig cfg;
  cfg.window_size = 6;
  Monitor monitor(baseline, cfg);
  for (int i = 0; i < 5; ++i) monitor.ingest_line(record_line(0.1 * i));
  auto rep = monitor.ingest_line(record_line(0.9, 1, 1));
  REQUIRE(rep.has_value());
  auto j = json::parse(*rep);
  // Data-drift metrics computed for all six records, concept fed by one.
  CHECK(j.at("features").at("f1").contains("covariate_drift"));
  CHECK(j.at("concept").contains("hlnr"));
  CHECK(j.at("concept").at("page_hinkley").at("increase").at("value").is_number());
}

TEST_CASE("monitor replay determinism") {
  auto baseline = make_numeric_baseline(5, true);
  RunConfig cfg;
  cfg.window_size = 50;
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::string> lines;
  for (int i = 0; i < 320; ++i) {
    const int y = static_cast<int>(rng() % 2);
    const int yhat = (rng() % 10 == 0) ? 1 - y : y;
    lines.push_back(record_line(gauss(rng), y, yhat));
  }
  auto run = [&]() {
    Monitor m(baseline, cfg);
    std::string out;
    for (const auto& line : lines) {
      if (auto rep = m.ingest_line(line)) out += *rep + "\n";
    }
    if (auto rep = m.finish()) out += *rep + "\n";
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("windowing conservation: every record lands in exactly one window") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 7;
  Monitor monitor(baseline, cfg);
  std::uint64_t counted = 0;
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::string> reports;
  for (int i = 0; i < 100; ++i) {
    const bool bad = (i % 13 == 0);
    auto rep = monitor.ingest_line(bad ? "garbage" : record_line(gauss(rng)));
    if (rep) reports.push_back(*rep);
  }
  if (auto rep = monitor.finish()) reports.push_back(*rep);
  for (const auto& r : reports) counted += json::parse(r).at("record_count").get<std::uint64_t>();
  CHECK(counted + monitor.records_skipped() == 100);
}

TEST_CASE("shifted stream breaches the covariate chart") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 200;
  Monitor monitor(baseline, cfg);
  std::mt19937 rng(21);
  std::normal_distribution<double> shifted(3.0, 1.0);
  std::optional<std::string> rep;
  for (int i = 0; i < 200; ++i) rep = monitor.ingest_line(record_line(shifted(rng)));
  REQUIRE(rep.has_value());
  auto j = json::parse(*rep);
  CHECK(j.at("features").at("f1").at("drift_level").get<std::string>() == "high");
  CHECK(j.at("verdict").get<std::string>() == "breach");
  CHECK(monitor.worst_seen() == ChartStatus::Breach);
  CHECK(exit_code_for(monitor.worst_seen()) == 4);
}

TEST_CASE("report summarizer aggregates verdicts and rankings") {
  auto baseline = make_numeric_baseline();
  RunConfig cfg;
  cfg.window_size = 100;
  Monitor monitor(baseline, cfg);
  std::mt19937 rng(33);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::string stream;
  for (int i = 0; i < 100; ++i) {
    if (auto rep = monitor.ingest_line(record_line(gauss(rng)))) stream += *rep + "\n";
  }
  std::normal_distribution<double> shifted(4.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    if (auto rep = monitor.ingest_line(record_line(shifted(rng)))) stream += *rep + "\n";
  }
  std::istringstream in(stream);
  auto summary = json::parse(summarize_reports(in));
  CHECK(summary.at("windows").get<int>() == 2);
  CHECK(summary.at("worst_verdict").get<std::string>() == "breach");
  CHECK(summary.at("first_breach_window").get<int>() == 1);
  CHECK(summary.at("feature_ranking")[0].at("feature").get<std::string>() == "f1");

  std::istringstream empty("");
  CHECK_THROWS_AS(summarize_reports(empty), EmptyInput);
}
