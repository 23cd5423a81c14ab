// Copyright 2026 The ALIP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// alip: command-line front end.
//
//   alip run       --model M --data D [--report R] [--plot-data P] ...
//   alip baseline  same flags, every enhancement off
//   alip ablate    one run per stage, summary JSON
//   alip simulate  --preset NAME | --scenario FILE  --out CSV
//   alip score     --model M --data TRUTH --estimates EST

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alip/error.h"
#include "alip/io.h"
#include "alip/metrics.h"
#include "alip/model_file.h"
#include "alip/pipeline.h"
#include "alip/simgen.h"

namespace {

using namespace alip;

struct InputOptions {
  std::string model_path;
  std::string data_path;
  std::size_t factor = 1;
  std::string mode = "decimate";
  std::string timestamp_col = "timestamp";
  std::string aggregate_col = "aggregate";
  bool derive_aggregate = false;
  std::string delimiter = ",";
};

struct RunOptions {
  InputOptions in;
  std::size_t lag = 4;
  std::size_t block_size = 5040;
  int threads = 1;
  std::string order = "std-median";
  std::string report_path;
  std::string plot_path;
  std::string estimates_path;
  bool timing = false;
};

void AddInputFlags(CLI::App* app, InputOptions& in) {
  app->add_option("--model", in.model_path, "Household model (YAML)")->required();
  app->add_option("--data", in.data_path, "Readings CSV")->required();
  app->add_option("--factor", in.factor, "Downsampling factor")
      ->check(CLI::PositiveNumber);
  app->add_option("--mode", in.mode, "Downsampling mode")
      ->check(CLI::IsMember({"decimate", "mean"}));
  app->add_option("--timestamp-col", in.timestamp_col,
                  "Timestamp column; empty uses row numbers");
  app->add_option("--aggregate-col", in.aggregate_col, "Aggregate column");
  app->add_flag("--derive-aggregate", in.derive_aggregate,
                "Sum the appliance channels instead of reading an aggregate");
  app->add_option("--delimiter", in.delimiter, "Field delimiter")
      ->check([](const std::string& d) {
        return d.size() == 1 ? std::string() : std::string("must be one character");
      });
}

void AddRunFlags(CLI::App* app, RunOptions& o) {
  AddInputFlags(app, o.in);
  app->add_option("--lag", o.lag, "Median lag L");
  app->add_option("--block-size", o.block_size, "Samples per scoring block")
      ->check(CLI::PositiveNumber);
  app->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--order", o.order, "Correction stage order")
      ->check(CLI::IsMember({"std-median", "median-std"}));
  app->add_option("--report", o.report_path, "JSON report output");
  app->add_option("--plot-data", o.plot_path, "Per-block CSV output");
  app->add_option("--estimates", o.estimates_path, "Per-sample estimates CSV output");
  app->add_flag("--timing", o.timing, "Include wall-clock timing in the report");
}

struct Loaded {
  HouseholdModel model;
  ReadingSeries series;
  std::optional<DenseMatrix> truth;
};

Loaded Load(const InputOptions& in) {
  HouseholdModel model = CompileModelFile(LoadModelFile(in.model_path));
  const char delimiter = in.delimiter[0];
  const std::vector<std::string> header = ReadCsvHeader(in.data_path, delimiter);
  ColumnMap columns;
  columns.delimiter = delimiter;
  columns.timestamp = in.timestamp_col;
  if (in.derive_aggregate) {
    columns.aggregate.reset();
  } else {
    columns.aggregate = in.aggregate_col;
  }
  for (const ApplianceSpec& a : model.appliances()) {
    if (std::find(header.begin(), header.end(), a.id) != header.end()) {
      columns.channels.push_back(a.id);
    } else if (in.derive_aggregate) {
      throw Error(ErrorCode::kMissingColumn,
                  "'" + in.data_path + "' has no channel '" + a.id + "'");
    }
  }
  ReadingSeries series = LoadCsv(in.data_path, columns);
  series = Downsample(series, in.factor,
                      in.mode == "mean" ? DownsampleMode::kMean : DownsampleMode::kDecimate);
  if (series.dropped_rows > 0 || series.clipped_rows > 0) {
    std::cerr << "note: dropped " << series.dropped_rows << " rows, clipped "
              << series.clipped_rows << " negative aggregates\n";
  }
  std::optional<DenseMatrix> truth = GroundTruthFor(series, model);
  return {std::move(model), std::move(series), std::move(truth)};
}

PipelineConfig MakeConfig(const RunOptions& o, const Enhancements& e) {
  PipelineConfig config;
  config.enhancements = e;
  config.median_lag = o.lag;
  config.block_size = o.block_size;
  config.threads = o.threads;
  config.order = o.order == "median-std" ? StageOrder::kMedianThenStd
                                         : StageOrder::kStdThenMedian;
  return config;
}

ReportOptions MakeReportOptions(const RunOptions& o) {
  ReportOptions r;
  r.model_path = o.in.model_path;
  r.data_path = o.in.data_path;
  r.factor = o.in.factor;
  r.mode = o.in.mode == "mean" ? DownsampleMode::kMean : DownsampleMode::kDecimate;
  r.include_timing = o.timing;
  return r;
}

void PrintSummary(const std::string& label, const DisaggregationResult& result,
                  const std::optional<AccuracyReport>& accuracy) {
  std::cout << label << ": " << result.assignments.size() << " samples";
  if (accuracy && accuracy->acc()) std::cout << ", ACC " << FormatNumber(*accuracy->acc());
  std::cout << ", " << FormatNumber(result.ms_per_sample()) << " ms/sample\n";
}

int DoRun(const RunOptions& o, const Enhancements& e) {
  const Loaded data = Load(o.in);
  const PipelineConfig config = MakeConfig(o, e);
  const DisaggregationResult result = Run(data.model, data.series.aggregate, config);
  std::optional<AccuracyReport> accuracy;
  if (data.truth) accuracy = Score(*data.truth, result.power, o.block_size);
  if (!o.report_path.empty()) {
    EmitReport(data.model, config, result, accuracy, MakeReportOptions(o), o.report_path);
  }
  if (!o.plot_path.empty()) {
    if (!accuracy) {
      throw Error(ErrorCode::kMissingColumn,
                  "--plot-data needs ground-truth channels named after the appliances");
    }
    EmitPlotData(data.model, *accuracy, o.plot_path);
  }
  if (!o.estimates_path.empty()) {
    WriteEstimatesCsv(data.model, data.series, result, o.estimates_path);
  }
  PrintSummary(RunLabel(e), result, accuracy);
  return 0;
}

int DoAblate(const RunOptions& o) {
  const Loaded data = Load(o.in);
  if (!data.truth) {
    throw Error(ErrorCode::kMissingColumn,
                "ablate needs ground-truth channels named after the appliances");
  }
  std::vector<Enhancements> sweep;
  sweep.push_back(Enhancements::None());
  for (int stage = 0; stage < 4; ++stage) {
    Enhancements e = Enhancements::None();
    if (stage == 0) e.constraints = true;
    if (stage == 1) e.std_correction = true;
    if (stage == 2) e.median = true;
    if (stage == 3) e.lp_refine = true;
    sweep.push_back(e);
  }
  sweep.push_back(Enhancements::All());

  nlohmann::ordered_json report;
  report["schema"] = "alip.ablation/1";
  report["model"] = o.in.model_path;
  report["data"] = o.in.data_path;
  report["median_lag"] = o.lag;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  std::string csv = std::string("# schema: alip.ablation/1\nlabel,acc");
  for (const ApplianceSpec& a : data.model.appliances()) csv += ",ac_" + a.id;
  csv += "\n";
  for (const Enhancements& e : sweep) {
    const PipelineConfig config = MakeConfig(o, e);
    const DisaggregationResult result = Run(data.model, data.series.aggregate, config);
    const AccuracyReport accuracy = Score(*data.truth, result.power, o.block_size);
    const auto value = [](const std::optional<double>& v) -> nlohmann::ordered_json {
      return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json run;
    run["label"] = RunLabel(e);
    run["acc"] = value(accuracy.acc());
    nlohmann::ordered_json ac = nlohmann::ordered_json::object();
    csv += RunLabel(e) + "," + (accuracy.acc() ? FormatNumber(*accuracy.acc()) : "nan");
    for (std::size_t j = 0; j < data.model.num_appliances(); ++j) {
      ac[data.model.appliance(j).id] = value(accuracy.ac(j));
      csv += "," + (accuracy.ac(j) ? FormatNumber(*accuracy.ac(j)) : "nan");
    }
    csv += "\n";
    run["ac"] = std::move(ac);
    if (o.timing) run["ms_per_sample"] = result.ms_per_sample();
    runs.push_back(std::move(run));
    PrintSummary(RunLabel(e), result, accuracy);
  }
  report["runs"] = std::move(runs);
  const auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  };
  if (!o.report_path.empty()) write(o.report_path, report.dump(2) + "\n");
  if (!o.plot_path.empty()) write(o.plot_path, csv);
  return 0;
}

struct SimulateOptions {
  std::string preset;
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> length;
  std::string out_path;
  std::string model_out;
  std::string states_out;
};

int DoSimulate(const SimulateOptions& o) {
  SimScenario scenario;
  if (!o.scenario_path.empty()) {
    scenario = LoadScenario(o.scenario_path);
  } else {
    scenario = Preset(o.preset, o.seed.value_or(1), o.length.value_or(10000));
  }
  if (o.seed) scenario.seed = *o.seed;
  if (o.length) scenario.length = *o.length;
  const SimResult sim = Simulate(scenario);
  WriteReadingsCsv(sim.series, o.out_path);
  if (!o.model_out.empty()) {
    std::ofstream out(o.model_out);
    out << ModelFileToYaml(scenario.model);
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + o.model_out + "'");
  }
  if (!o.states_out.empty()) {
    std::ofstream out(o.states_out);
    out << "# schema: alip.states/1\ntimestamp";
    for (const std::string& id : sim.series.channel_names) out << ',' << id;
    out << '\n';
    for (std::size_t k = 0; k < sim.states.size(); ++k) {
      out << k;
      for (int c : sim.states[k]) out << ',' << c;
      out << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + o.states_out + "'");
  }
  std::cout << "simulated " << sim.series.size() << " samples -> " << o.out_path << "\n";
  return 0;
}

int DoScore(const RunOptions& o) {
  const Loaded data = Load(o.in);
  if (!data.truth) {
    throw Error(ErrorCode::kMissingColumn,
                "'" + o.in.data_path + "' lacks ground-truth channels for every appliance");
  }
  ColumnMap columns;
  columns.delimiter = ',';
  columns.aggregate.reset();
  for (const ApplianceSpec& a : data.model.appliances()) columns.channels.push_back(a.id);
  const ReadingSeries est = LoadCsv(o.estimates_path, columns);
  if (est.size() != data.series.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "estimates have " + std::to_string(est.size()) + " rows, data has " +
                    std::to_string(data.series.size()));
  }
  const AccuracyReport accuracy = Score(*data.truth, est.channels, o.block_size);
  if (!o.report_path.empty()) {
    EmitScoreReport(data.model, accuracy, MakeReportOptions(o), o.report_path);
  }
  if (!o.plot_path.empty()) EmitPlotData(data.model, accuracy, o.plot_path);
  std::cout << "ACC " << (accuracy.acc() ? FormatNumber(*accuracy.acc()) : "undefined")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Load disaggregation by aided linear integer programming"};
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Full pipeline");
  AddRunFlags(run, run_opts);
  bool no_constraints = false, no_std = false, no_median = false, no_lp = false;
  run->add_flag("--no-constraints", no_constraints, "Disable the extra constraint rows");
  run->add_flag("--no-std", no_std, "Disable state transition correction");
  run->add_flag("--no-median", no_median, "Disable median correction");
  run->add_flag("--no-lp", no_lp, "Disable transient refinement");

  RunOptions base_opts;
  CLI::App* baseline = app.add_subcommand("baseline", "Plain integer program");
  AddRunFlags(baseline, base_opts);

  RunOptions ablate_opts;
  CLI::App* ablate = app.add_subcommand("ablate", "One run per enhancement stage");
  AddRunFlags(ablate, ablate_opts);

  SimulateOptions sim_opts;
  CLI::App* simulate = app.add_subcommand("simulate", "Synthetic household data");
  auto* preset = simulate->add_option("--preset", sim_opts.preset, "Bundled scenario")
                     ->check(CLI::IsMember(PresetNames()));
  auto* scenario = simulate->add_option("--scenario", sim_opts.scenario_path,
                                        "Scenario file (YAML)");
  preset->excludes(scenario);
  simulate->add_option("--seed", sim_opts.seed, "RNG seed");
  simulate->add_option("--length", sim_opts.length, "Samples");
  simulate->add_option("--out", sim_opts.out_path, "Readings CSV output")->required();
  simulate->add_option("--model-out", sim_opts.model_out, "Model YAML output");
  simulate->add_option("--states-out", sim_opts.states_out, "True state codes CSV");

  RunOptions score_opts;
  CLI::App* score = app.add_subcommand("score", "Metrics for existing estimates");
  AddInputFlags(score, score_opts.in);
  score->add_option("--estimates", score_opts.estimates_path, "Estimates CSV")->required();
  score->add_option("--block-size", score_opts.block_size, "Samples per scoring block")
      ->check(CLI::PositiveNumber);
  score->add_option("--report", score_opts.report_path, "JSON report output");
  score->add_option("--plot-data", score_opts.plot_path, "Per-block CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      Enhancements e = Enhancements::All();
      e.constraints = !no_constraints;
      e.std_correction = !no_std;
      e.median = !no_median;
      e.lp_refine = !no_lp;
      return DoRun(run_opts, e);
    }
    if (*baseline) return DoRun(base_opts, Enhancements::None());
    if (*ablate) return DoAblate(ablate_opts);
    if (*simulate) {
      if (sim_opts.preset.empty() && sim_opts.scenario_path.empty()) {
        std::cerr << "simulate: one of --preset or --scenario is required\n";
        return 2;
      }
      return DoSimulate(sim_opts);
    }
    if (*score) return DoScore(score_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
