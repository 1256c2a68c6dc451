// driftwatch — drift monitoring CLI.
//
//   driftwatch baseline --input train.csv --output baseline.json [schema flags]
//   driftwatch monitor  --baseline baseline.json --input live.ndjson [--window N]
//   driftwatch report   --input reports.ndjson
//
// monitor exit codes: 0 in-control, 2 usage/input error, 3 trending, 4 breach.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftwatch/baseline.hpp"
#include "driftwatch/config.hpp"
#include "driftwatch/errors.hpp"
#include "driftwatch/monitor.hpp"

namespace {

using namespace driftwatch;

RunConfig load_run_config(const std::string& config_path) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config_file(config_path);
  apply_env_overrides(cfg);
  return cfg;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

int run_baseline(const std::string& input, const std::string& output,
                 const std::string& config_path, const std::string& target,
                 const std::string& prediction, const std::string& probability,
                 const std::vector<std::string>& categorical,
                 const std::vector<std::string>& ignore, const std::string& created_at) {
  RunConfig cfg = load_run_config(config_path);
  Table table = read_csv_file(input);

  std::vector<FeatureSchema> schema;
  for (const auto& col : table.columns) {
    FeatureSchema f;
    f.name = col;
    if (col == target) f.role = FeatureRole::Target;
    else if (col == prediction) f.role = FeatureRole::Prediction;
    else if (col == probability) f.role = FeatureRole::Probability;
    else if (contains(ignore, col)) f.role = FeatureRole::Ignore;
    else f.role = FeatureRole::Predictor;
    f.kind = contains(categorical, col) ? FeatureKind::Categorical : FeatureKind::Numeric;
    schema.push_back(f);
  }

  BaselineConfig bcfg;
  bcfg.bin_count_covariate = cfg.bin_count_covariate;
  bcfg.bin_count_stability = cfg.bin_count_stability;
  if (!created_at.empty()) bcfg.created_at = created_at;

  BaselineSnapshot snap = build_baseline(table, schema, bcfg);
  save_baseline(snap, output);

  std::size_t predictors = 0, degenerate = 0;
  for (const auto& f : snap.features) {
    if (f.schema.role == FeatureRole::Predictor) {
      ++predictors;
      if (f.degenerate) ++degenerate;
    }
  }
  std::cerr << "baseline written to " << output << ": " << predictors << " predictors ("
            << degenerate << " degenerate), bins " << cfg.bin_count_covariate << "/"
            << cfg.bin_count_stability;
  if (snap.confusion) std::cerr << ", confusion counts present";
  std::cerr << "\n";
  return 0;
}

int run_monitor(const std::string& baseline_path, const std::string& input,
                const std::string& output, const std::string& config_path,
                std::size_t window_override, bool strict) {
  RunConfig cfg = load_run_config(config_path);
  if (window_override > 0) cfg.window_size = window_override;
  if (strict) cfg.strict = true;

  BaselineSnapshot snap = load_baseline(baseline_path);
  Monitor monitor(std::move(snap), cfg);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (input != "-") {
    file_in.open(input);
    if (!file_in) throw IoFailure("cannot open '" + input + "'");
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!output.empty() && output != "-") {
    file_out.open(output, std::ios::binary);
    if (!file_out) throw IoFailure("cannot write '" + output + "'");
    out = &file_out;
  }

  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    if (auto report = monitor.ingest_line(line)) *out << *report << "\n";
  }
  if (auto report = monitor.finish()) *out << *report << "\n";
  out->flush();
  return exit_code_for(monitor.worst_seen());
}

int run_report(const std::string& input) {
  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (input != "-") {
    file_in.open(input);
    if (!file_in) throw IoFailure("cannot open '" + input + "'");
    in = &file_in;
  }
  std::cout << summarize_reports(*in) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftwatch: data and concept drift monitoring against a frozen training baseline"};
  app.require_subcommand(1);

  std::string input, output, config_path, baseline_path;
  std::string target, prediction, probability, created_at;
  std::vector<std::string> categorical, ignore;
  std::size_t window = 0;
  bool strict = false;
  std::string format = "ndjson";

  auto* cmd_baseline = app.add_subcommand("baseline", "build a baseline snapshot from training CSV");
  cmd_baseline->add_option("--input", input, "training CSV with header")->required();
  cmd_baseline->add_option("--output", output, "baseline file to write")->required();
  cmd_baseline->add_option("--config", config_path, "JSON config file");
  cmd_baseline->add_option("--target", target, "ground-truth column");
  cmd_baseline->add_option("--prediction", prediction, "model prediction column");
  cmd_baseline->add_option("--probability", probability, "predicted probability column");
  cmd_baseline->add_option("--categorical", categorical, "categorical columns");
  cmd_baseline->add_option("--ignore", ignore, "columns to skip");
  cmd_baseline->add_option("--created-at", created_at, "timestamp to stamp into the snapshot");

  auto* cmd_monitor = app.add_subcommand("monitor", "stream live records and emit window reports");
  cmd_monitor->add_option("--baseline", baseline_path, "baseline file")->required();
  cmd_monitor->add_option("--input", input, "NDJSON record stream ('-' for stdin)")->default_val("-");
  cmd_monitor->add_option("--output", output, "report stream destination (default stdout)");
  cmd_monitor->add_option("--config", config_path, "JSON config file");
  cmd_monitor->add_option("--window", window, "records per evaluation window");
  cmd_monitor->add_option("--format", format, "report format")->check(CLI::IsMember({"ndjson"}));
  cmd_monitor->add_flag("--strict", strict, "malformed record is fatal");

  auto* cmd_report = app.add_subcommand("report", "summarize a report stream");
  cmd_report->add_option("--input", input, "NDJSON report stream ('-' for stdin)")->default_val("-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_baseline->parsed()) {
      return run_baseline(input, output, config_path, target, prediction, probability,
                          categorical, ignore, created_at);
    }
    if (cmd_monitor->parsed()) {
      return run_monitor(baseline_path, input, output, config_path, window, strict);
    }
    if (cmd_report->parsed()) {
      return run_report(input);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
