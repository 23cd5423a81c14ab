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

// The end-to-end disaggregation flow:
//
//   per-sample MILP solve  ->  state transition correction
//                          ->  lagged median correction
//                          ->  transient LP refinement
//
// Each stage can be switched off through Enhancements. With every flag off
// the output is the plain per-sample integer program.

#ifndef ALIP_PIPELINE_H_
#define ALIP_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "alip/dense_matrix.h"
#include "alip/formulation.h"
#include "alip/model.h"

namespace alip {

enum class StageOrder {
  kStdThenMedian,  // median reads STD-corrected estimates
  kMedianThenStd,  // median reads raw solver estimates
};

struct PipelineConfig {
  std::size_t median_lag = 4;
  Enhancements enhancements;
  std::size_t block_size = 5040;
  int threads = 1;
  StageOrder order = StageOrder::kStdThenMedian;
};

// Bits of DisaggregationResult::corrected_stages.
enum StageBit : std::uint8_t {
  kStageStd = 1 << 0,
  kStageMedian = 1 << 1,
  kStageStdGuard = 1 << 2,
  kStageLpRefine = 1 << 3,
};

struct StageCounters {
  std::size_t std_corrections = 0;
  std::size_t median_corrections = 0;
  std::size_t std_guard_corrections = 0;
  std::size_t lp_refined = 0;
};

struct DisaggregationResult {
  // Final per-sample assignments; s holds steady ratings.
  std::vector<StateAssignment> assignments;
  // T x n state codes (0 = OFF) matching `assignments`.
  std::vector<std::vector<int>> states;
  // T x n per-appliance power after refinement.
  DenseMatrix power;
  StageCounters counters;
  std::vector<std::uint8_t> corrected_stages;
  double seconds_total = 0.0;

  double ms_per_sample() const {
    return assignments.empty()
               ? 0.0
               : 1e3 * seconds_total / static_cast<double>(assignments.size());
  }
};

struct StdCorrection {
  StateAssignment assignment;
  bool changed = false;
};

// Forward STD correction of one timestep. Appliances whose candidate state is
// unreachable from `prev` are re-solved over their reachable states while the
// consistent appliances stay fixed; if that is infeasible, every appliance is
// re-solved over its reachable set. Throws kNoReachableState.
StdCorrection CorrectTransitions(const HouseholdModel& model,
                                 std::span<const int> prev,
                                 const StateAssignment& candidate, double z,
                                 const Enhancements& enhancements);

// Window vote for the oldest sample of `window` (window.front()). Returns the
// most frequent code; ties keep window.front() if it is tied, otherwise the
// smallest tied code. For two states this is the median.
int MedianVote(std::span<const int> window);

// Applies the lagged correction to a whole code sequence: sample p becomes
// the vote over original[p .. min(p + lag, T - 1)]. Corrected values never
// feed later windows.
std::vector<int> MedianCorrectSequence(std::span<const int> original,
                                       std::size_t lag);

// Runs the configured flow. Throws Error on invalid readings and propagates
// solver errors annotated with the sample index.
DisaggregationResult Run(const HouseholdModel& model,
                         std::span<const double> readings,
                         const PipelineConfig& config);

}  // namespace alip

#endif  // ALIP_PIPELINE_H_
