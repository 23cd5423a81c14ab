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

#include "alip/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include "alip/error.h"
#include "alip/solver.h"
#include "parallel.h"

namespace alip {

namespace {

Error AtSample(const Error& e, std::size_t k) {
  std::string what = e.what();
  // Strip the "Code: " prefix added by Error so it is not repeated.
  const auto colon = what.find(": ");
  if (colon != std::string::npos) what = what.substr(colon + 2);
  return Error(e.code(), "sample " + std::to_string(k) + ": " + what);
}

bool HasIllegalStep(const HouseholdModel& model, std::span<const int> prev,
                    std::span<const int> next) {
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    if (!model.CanTransition(j, prev[j], next[j])) return true;
  }
  return false;
}

}  // namespace

StdCorrection CorrectTransitions(const HouseholdModel& model,
                                 std::span<const int> prev,
                                 const StateAssignment& candidate, double z,
                                 const Enhancements& enhancements) {
  const std::vector<int> codes = StateCodes(model, candidate.b);
  const std::size_t n = model.num_appliances();
  Domains restricted(n);
  Domains reachable(n);
  bool violated = false;
  for (std::size_t j = 0; j < n; ++j) {
    reachable[j] = model.Successors(j, prev[j]);
    if (reachable[j].empty()) {
      throw Error(ErrorCode::kNoReachableState,
                  "appliance '" + model.appliance(j).id + "' has no successor of " +
                      model.label(j, prev[j]));
    }
    if (model.CanTransition(j, prev[j], codes[j])) {
      restricted[j] = {codes[j]};
    } else {
      restricted[j] = reachable[j];
      violated = true;
    }
  }
  if (!violated) return {candidate, false};

  const MilpInstance inst = BuildInstance(model, z, enhancements);
  try {
    return {SolveBranchAndBound(inst, model, &restricted), true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible) throw;
  }
  try {
    return {SolveBranchAndBound(inst, model, &reachable), true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible) throw;
    throw Error(ErrorCode::kNoReachableState,
                "no feasible assignment is reachable from the previous states");
  }
}

int MedianVote(std::span<const int> window) {
  std::map<int, int> votes;
  for (int c : window) ++votes[c];
  const int current = window.front();
  int best = current;
  int best_votes = votes[current];
  for (const auto& [code, count] : votes) {
    if (count > best_votes) {
      best = code;
      best_votes = count;
    }
  }
  return best;
}

std::vector<int> MedianCorrectSequence(std::span<const int> original,
                                       std::size_t lag) {
  std::vector<int> out(original.begin(), original.end());
  for (std::size_t p = 0; p < original.size(); ++p) {
    const std::size_t end = std::min(original.size(), p + lag + 1);
    out[p] = MedianVote(original.subspan(p, end - p));
  }
  return out;
}

DisaggregationResult Run(const HouseholdModel& model,
                         std::span<const double> readings,
                         const PipelineConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t T = readings.size();
  const std::size_t n = model.num_appliances();
  const Enhancements& enh = config.enhancements;
  for (std::size_t k = 0; k < T; ++k) {
    if (!std::isfinite(readings[k]) || readings[k] < 0.0) {
      throw Error(ErrorCode::kInvalidConfig,
                  "sample " + std::to_string(k) + " is negative or non-finite");
    }
  }

  DisaggregationResult result;
  result.assignments.resize(T);
  result.corrected_stages.assign(T, 0);

  internal::ParallelFor(T, config.threads, [&](std::size_t k) {
    try {
      result.assignments[k] =
          SolveBranchAndBound(BuildInstance(model, readings[k], enh), model);
    } catch (const Error& e) {
      throw AtSample(e, k);
    }
  });

  std::vector<std::vector<int>> codes(T);
  for (std::size_t k = 0; k < T; ++k) {
    codes[k] = StateCodes(model, result.assignments[k].b);
  }

  // Forward correction against the corrected previous sample.
  const auto std_pass = [&](StageBit bit, std::size_t& counter) {
    for (std::size_t k = 1; k < T; ++k) {
      if (!HasIllegalStep(model, codes[k - 1], codes[k])) continue;
      try {
        StdCorrection c = CorrectTransitions(model, codes[k - 1],
                                             result.assignments[k], readings[k], enh);
        if (c.changed) {
          result.assignments[k] = std::move(c.assignment);
          codes[k] = StateCodes(model, result.assignments[k].b);
          result.corrected_stages[k] |= bit;
          ++counter;
        }
      } catch (const Error& e) {
        throw AtSample(e, k);
      }
    }
  };

  if (enh.std_correction && config.order == StageOrder::kStdThenMedian) {
    std_pass(kStageStd, result.counters.std_corrections);
  }

  if (enh.median && T > 0) {
    std::vector<std::vector<int>> corrected = codes;
    std::vector<int> column(T);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < T; ++k) column[k] = codes[k][j];
      const std::vector<int> filtered =
          MedianCorrectSequence(column, config.median_lag);
      for (std::size_t k = 0; k < T; ++k) corrected[k][j] = filtered[k];
    }
    for (std::size_t k = 0; k < T; ++k) {
      if (corrected[k] == codes[k]) continue;
      codes[k] = std::move(corrected[k]);
      result.assignments[k] = MakeAssignment(model, codes[k], readings[k]);
      result.corrected_stages[k] |= kStageMedian;
      ++result.counters.median_corrections;
    }
  }

  if (enh.std_correction) {
    // After the median stage this keeps the output free of illegal steps.
    if (config.order == StageOrder::kStdThenMedian) {
      if (enh.median) {
        std_pass(kStageStdGuard, result.counters.std_guard_corrections);
      }
    } else {
      std_pass(kStageStd, result.counters.std_corrections);
    }
  }

  result.power = DenseMatrix(T, n);
  std::vector<char> refined(T, 0);
  internal::ParallelFor(T, config.threads, [&](std::size_t k) {
    const StateAssignment& a = result.assignments[k];
    for (std::size_t j = 0; j < n; ++j) result.power(k, j) = a.s[j];
    if (!enh.lp_refine) return;
    const RefinementProblem p = MakeRefinementProblem(model, a.b, readings[k]);
    if (p.p2.empty()) return;
    try {
      const RefinementSolution sol = SolveRefinementLp(p);
      for (std::size_t t = 0; t < p.p2.size(); ++t) {
        result.power(k, model.owner(p.p2[t])) = sol.y[t];
      }
      refined[k] = 1;
    } catch (const Error& e) {
      throw AtSample(e, k);
    }
  });
  for (std::size_t k = 0; k < T; ++k) {
    if (refined[k]) {
      result.corrected_stages[k] |= kStageLpRefine;
      ++result.counters.lp_refined;
    }
  }

  result.states = std::move(codes);
  result.seconds_total = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
  return result;
}

}  // namespace alip
