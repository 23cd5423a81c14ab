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

#include "alip/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "alip/error.h"
#include "json.hpp"

namespace alip {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    fields.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool IsSkippable(std::string_view line) {
  line = Trim(line);
  return line.empty() || line.front() == '#';
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  return out;
}

void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

enum class FieldValue { kOk, kMissing, kGarbage };

FieldValue ParseField(std::string_view text, double& value) {
  if (text.empty()) return FieldValue::kMissing;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return FieldValue::kGarbage;
  }
  return std::isfinite(value) ? FieldValue::kOk : FieldValue::kMissing;
}

std::size_t FindColumn(const std::vector<std::string>& header,
                       const std::string& name, const std::string& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::kMissingColumn,
                "column '" + name + "' not found in '" + path + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

std::string EnhancementsList(const Enhancements& e) {
  std::string out;
  const auto add = [&out](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(e.constraints, "constraints");
  add(e.std_correction, "std");
  add(e.median, "median");
  add(e.lp_refine, "lp");
  return out;
}

nlohmann::ordered_json Accuracy(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string> ReadCsvHeader(const std::string& path, char delimiter) {
  std::ifstream in = OpenInput(path);
  std::string line;
  while (std::getline(in, line)) {
    if (IsSkippable(line)) continue;
    std::vector<std::string> header;
    for (std::string_view f : Split(line, delimiter)) header.emplace_back(f);
    return header;
  }
  throw Error(ErrorCode::kParseError, "'" + path + "' has no header row");
}

ReadingSeries LoadCsv(const std::string& path, const ColumnMap& columns) {
  std::ifstream in = OpenInput(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippable(line)) continue;
    for (std::string_view f : Split(line, columns.delimiter)) header.emplace_back(f);
    break;
  }
  if (header.empty()) {
    throw Error(ErrorCode::kParseError, "'" + path + "' has no header row");
  }

  std::optional<std::size_t> ts_col;
  if (!columns.timestamp.empty()) ts_col = FindColumn(header, columns.timestamp, path);
  std::optional<std::size_t> agg_col;
  if (columns.aggregate) agg_col = FindColumn(header, *columns.aggregate, path);
  std::vector<std::size_t> ch_cols;
  for (const std::string& c : columns.channels) ch_cols.push_back(FindColumn(header, c, path));
  if (!agg_col && ch_cols.empty()) {
    throw Error(ErrorCode::kMissingColumn,
                "need an aggregate column or at least one channel column");
  }

  ReadingSeries series;
  series.channel_names = columns.channels;
  series.channels = DenseMatrix(columns.channels.size());
  std::vector<double> channel_values(ch_cols.size());
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippable(line)) continue;
    const std::vector<std::string_view> fields = Split(line, columns.delimiter);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    bool missing = false;
    const auto read = [&](std::size_t col, double& out) {
      switch (ParseField(fields[col], out)) {
        case FieldValue::kOk: break;
        case FieldValue::kMissing: missing = true; break;
        case FieldValue::kGarbage:
          throw Error(ErrorCode::kParseError,
                      path + ":" + std::to_string(line_no) + ": column '" +
                          header[col] + "' is not a number: '" +
                          std::string(fields[col]) + "'");
      }
    };
    double ts = static_cast<double>(row_index);
    if (ts_col) read(*ts_col, ts);
    double agg = 0.0;
    if (agg_col) read(*agg_col, agg);
    for (std::size_t c = 0; c < ch_cols.size(); ++c) read(ch_cols[c], channel_values[c]);
    ++row_index;
    if (missing) {
      ++series.dropped_rows;
      continue;
    }
    if (!agg_col) {
      for (double v : channel_values) agg += v;
    }
    if (!series.timestamps.empty() && ts < series.timestamps.back()) {
      throw Error(ErrorCode::kParseError, path + ":" + std::to_string(line_no) +
                                              ": timestamp goes backwards");
    }
    if (agg < 0.0) {
      agg = 0.0;
      ++series.clipped_rows;
    }
    series.timestamps.push_back(ts);
    series.aggregate.push_back(agg);
    std::span<double> row = series.channels.AppendRow();
    std::copy(channel_values.begin(), channel_values.end(), row.begin());
  }
  return series;
}

void WriteReadingsCsv(const ReadingSeries& series, const std::string& path) {
  std::ofstream out = OpenOutput(path);
  out << "# schema: " << kReadingsSchema << '\n' << "timestamp,aggregate";
  for (const std::string& name : series.channel_names) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << FormatNumber(series.timestamps[k]) << ','
        << FormatNumber(series.aggregate[k]);
    for (std::size_t c = 0; c < series.channel_names.size(); ++c) {
      out << ',' << FormatNumber(series.channels(k, c));
    }
    out << '\n';
  }
  Finish(out, path);
}

ReadingSeries Downsample(const ReadingSeries& series, std::size_t factor,
                         DownsampleMode mode) {
  if (factor == 0) throw Error(ErrorCode::kInvalidConfig, "factor must be >= 1");
  ReadingSeries out;
  out.channel_names = series.channel_names;
  out.channels = DenseMatrix(series.channel_names.size());
  out.dropped_rows = series.dropped_rows;
  out.clipped_rows = series.clipped_rows;
  const std::size_t width = series.channel_names.size();
  for (std::size_t start = 0; start < series.size(); start += factor) {
    std::span<double> row = out.channels.AppendRow();
    out.timestamps.push_back(series.timestamps[start]);
    if (mode == DownsampleMode::kDecimate) {
      out.aggregate.push_back(series.aggregate[start]);
      for (std::size_t c = 0; c < width; ++c) row[c] = series.channels(start, c);
      continue;
    }
    const std::size_t end = std::min(series.size(), start + factor);
    const double count = static_cast<double>(end - start);
    double agg = 0.0;
    for (std::size_t k = start; k < end; ++k) agg += series.aggregate[k];
    out.aggregate.push_back(agg / count);
    for (std::size_t c = 0; c < width; ++c) {
      double sum = 0.0;
      for (std::size_t k = start; k < end; ++k) sum += series.channels(k, c);
      row[c] = sum / count;
    }
  }
  return out;
}

std::optional<DenseMatrix> GroundTruthFor(const ReadingSeries& series,
                                          const HouseholdModel& model) {
  std::vector<std::size_t> cols;
  for (const ApplianceSpec& a : model.appliances()) {
    const auto it = std::find(series.channel_names.begin(),
                              series.channel_names.end(), a.id);
    if (it == series.channel_names.end()) return std::nullopt;
    cols.push_back(static_cast<std::size_t>(it - series.channel_names.begin()));
  }
  DenseMatrix truth(series.size(), cols.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      truth(k, i) = series.channels(k, cols[i]);
    }
  }
  return truth;
}

std::string RunLabel(const Enhancements& enhancements) {
  if (!enhancements.any()) return "IP";
  if (enhancements == Enhancements::All()) return "ALIP";
  std::string label = "IP";
  if (enhancements.constraints) label += "+constraints";
  if (enhancements.std_correction) label += "+std";
  if (enhancements.median) label += "+median";
  if (enhancements.lp_refine) label += "+lp";
  return label;
}

void EmitReport(const HouseholdModel& model, const PipelineConfig& config,
                const DisaggregationResult& result,
                const std::optional<AccuracyReport>& accuracy,
                const ReportOptions& options, const std::string& path) {
  using nlohmann::ordered_json;
  ordered_json report;
  report["schema"] = kReportSchema;
  report["label"] = options.label.empty() ? RunLabel(config.enhancements)
                                          : options.label;
  report["model"] = options.model_path;
  report["data"] = options.data_path;
  report["config"] = {
      {"enhancements", EnhancementsList(config.enhancements)},
      {"median_lag", config.median_lag},
      {"block_size", config.block_size},
      {"order", config.order == StageOrder::kStdThenMedian ? "std,median"
                                                           : "median,std"},
      {"downsample_factor", options.factor},
      {"downsample_mode",
       options.mode == DownsampleMode::kDecimate ? "decimate" : "mean"},
  };
  report["samples"] = result.assignments.size();

  ordered_json appliances = ordered_json::array();
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    ordered_json a;
    a["id"] = model.appliance(j).id;
    a["states"] = model.num_states_of(j);
    if (accuracy) {
      a["ac"] = Accuracy(accuracy->ac(j));
      a["error_mass"] = accuracy->appliances[j].error;
      a["truth_mass"] = accuracy->appliances[j].truth;
      if (!accuracy->ac(j)) a["note"] = "undefined: ground truth is all zero";
    }
    double energy = 0.0;
    for (std::size_t k = 0; k < result.power.rows(); ++k) energy += result.power(k, j);
    a["estimated_mass"] = energy;
    appliances.push_back(std::move(a));
  }
  report["appliances"] = std::move(appliances);
  if (accuracy) {
    report["acc"] = Accuracy(accuracy->acc());
    report["error_mass"] = accuracy->overall.error;
    report["truth_mass"] = accuracy->overall.truth;
    report["blocks"] = accuracy->blocks.size();
  } else {
    report["acc"] = nullptr;
    report["note"] = "no ground truth channels; accuracy not computed";
  }
  report["counters"] = {
      {"std_corrections", result.counters.std_corrections},
      {"median_corrections", result.counters.median_corrections},
      {"std_guard_corrections", result.counters.std_guard_corrections},
      {"lp_refined", result.counters.lp_refined},
  };
  if (options.include_timing) {
    report["timing"] = {
        {"seconds_total", result.seconds_total},
        {"ms_per_sample", result.ms_per_sample()},
    };
  }

  std::ofstream out = OpenOutput(path);
  out << report.dump(2) << '\n';
  Finish(out, path);
}

void EmitScoreReport(const HouseholdModel& model, const AccuracyReport& accuracy,
                     const ReportOptions& options, const std::string& path) {
  using nlohmann::ordered_json;
  ordered_json report;
  report["schema"] = kReportSchema;
  report["label"] = options.label.empty() ? "score" : options.label;
  report["model"] = options.model_path;
  report["data"] = options.data_path;
  report["samples"] = accuracy.blocks.empty()
                          ? 0
                          : accuracy.blocks.back().start + accuracy.blocks.back().length;
  ordered_json appliances = ordered_json::array();
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    ordered_json a;
    a["id"] = model.appliance(j).id;
    a["ac"] = Accuracy(accuracy.ac(j));
    a["error_mass"] = accuracy.appliances[j].error;
    a["truth_mass"] = accuracy.appliances[j].truth;
    if (!accuracy.ac(j)) a["note"] = "undefined: ground truth is all zero";
    appliances.push_back(std::move(a));
  }
  report["appliances"] = std::move(appliances);
  report["acc"] = Accuracy(accuracy.acc());
  report["error_mass"] = accuracy.overall.error;
  report["truth_mass"] = accuracy.overall.truth;
  report["blocks"] = accuracy.blocks.size();

  std::ofstream out = OpenOutput(path);
  out << report.dump(2) << '\n';
  Finish(out, path);
}

void EmitPlotData(const HouseholdModel& model, const AccuracyReport& accuracy,
                  const std::string& path) {
  std::ofstream out = OpenOutput(path);
  out << "# schema: " << kPlotSchema << '\n'
      << "block,start,length,partial,acc,error_mass,truth_mass";
  for (const ApplianceSpec& a : model.appliances()) out << ",ac_" << a.id;
  out << '\n';
  const auto cell = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string("nan");
  };
  for (std::size_t b = 0; b < accuracy.blocks.size(); ++b) {
    const BlockScore& block = accuracy.blocks[b];
    out << b << ',' << block.start << ',' << block.length << ','
        << (block.partial ? 1 : 0) << ',' << cell(block.overall.accuracy()) << ','
        << FormatNumber(block.overall.error) << ','
        << FormatNumber(block.overall.truth);
    for (const ErrorMass& m : block.appliances) out << ',' << cell(m.accuracy());
    out << '\n';
  }
  Finish(out, path);
}

void WriteEstimatesCsv(const HouseholdModel& model, const ReadingSeries& series,
                       const DisaggregationResult& result,
                       const std::string& path) {
  std::ofstream out = OpenOutput(path);
  out << "# schema: " << kEstimatesSchema << '\n' << "timestamp,aggregate";
  for (const ApplianceSpec& a : model.appliances()) out << ',' << a.id;
  for (const ApplianceSpec& a : model.appliances()) out << ",state_" << a.id;
  out << ",stages\n";
  for (std::size_t k = 0; k < result.assignments.size(); ++k) {
    out << FormatNumber(series.timestamps[k]) << ','
        << FormatNumber(series.aggregate[k]);
    for (std::size_t j = 0; j < model.num_appliances(); ++j) {
      out << ',' << FormatNumber(result.power(k, j));
    }
    for (std::size_t j = 0; j < model.num_appliances(); ++j) {
      out << ',' << model.label(j, result.states[k][j]);
    }
    out << ',' << static_cast<int>(result.corrected_stages[k]) << '\n';
  }
  Finish(out, path);
}

}  // namespace alip
