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

// Reading series ingestion and result emission.
//
// CSV files carry a header row. Lines starting with '#' are comments; the
// writers in this file emit a leading "# schema: <name>/<version>" comment.

#ifndef ALIP_IO_H_
#define ALIP_IO_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "alip/dense_matrix.h"
#include "alip/metrics.h"
#include "alip/model.h"
#include "alip/pipeline.h"

namespace alip {

inline constexpr const char* kReadingsSchema = "alip.readings/1";
inline constexpr const char* kEstimatesSchema = "alip.estimates/1";
inline constexpr const char* kPlotSchema = "alip.plot/1";
inline constexpr const char* kReportSchema = "alip.report/1";

struct ReadingSeries {
  std::vector<double> timestamps;
  std::vector<double> aggregate;
  std::vector<std::string> channel_names;
  DenseMatrix channels;  // T x channel_names.size(), may be empty
  std::size_t dropped_rows = 0;
  std::size_t clipped_rows = 0;

  std::size_t size() const { return aggregate.size(); }
};

struct ColumnMap {
  std::string timestamp = "timestamp";  // empty: use the row number
  // When unset the aggregate is the row sum of the channels.
  std::optional<std::string> aggregate = "aggregate";
  std::vector<std::string> channels;
  char delimiter = ',';
};

// Header fields of a CSV file, after comment lines.
std::vector<std::string> ReadCsvHeader(const std::string& path, char delimiter);

// Rows with an empty or non-finite field are dropped and counted; negative
// aggregates are clipped to zero and counted. Throws kParseError (with line
// number), kMissingColumn or kIoError.
ReadingSeries LoadCsv(const std::string& path, const ColumnMap& columns);

void WriteReadingsCsv(const ReadingSeries& series, const std::string& path);

enum class DownsampleMode { kDecimate, kMean };

// Keeps every factor-th sample, or averages consecutive windows of `factor`
// (a trailing short window is averaged over its actual length).
ReadingSeries Downsample(const ReadingSeries& series, std::size_t factor,
                         DownsampleMode mode = DownsampleMode::kDecimate);

// Ground-truth matrix in model appliance order, if every appliance has a
// channel of the same name.
std::optional<DenseMatrix> GroundTruthFor(const ReadingSeries& series,
                                          const HouseholdModel& model);

// "IP" with no enhancements, "ALIP" with all, otherwise "IP+<stage>...".
std::string RunLabel(const Enhancements& enhancements);

struct ReportOptions {
  std::string label;
  std::string model_path;
  std::string data_path;
  std::size_t factor = 1;
  DownsampleMode mode = DownsampleMode::kDecimate;
  bool include_timing = false;
};

// Structured JSON report: per-appliance AC, overall ACC, stage counters and
// optionally timing. Throws kIoError.
void EmitReport(const HouseholdModel& model, const PipelineConfig& config,
                const DisaggregationResult& result,
                const std::optional<AccuracyReport>& accuracy,
                const ReportOptions& options, const std::string& path);

// Metrics-only report for externally produced estimates. Throws kIoError.
void EmitScoreReport(const HouseholdModel& model, const AccuracyReport& accuracy,
                     const ReportOptions& options, const std::string& path);

// One row per block: index, start, length, partial flag, ACC, error and truth
// masses, then AC per appliance. Throws kIoError.
void EmitPlotData(const HouseholdModel& model, const AccuracyReport& accuracy,
                  const std::string& path);

// Per-sample refined power and state labels.
void WriteEstimatesCsv(const HouseholdModel& model, const ReadingSeries& series,
                       const DisaggregationResult& result,
                       const std::string& path);

// Shortest round-trip decimal representation.
std::string FormatNumber(double value);

}  // namespace alip

#endif  // ALIP_IO_H_
