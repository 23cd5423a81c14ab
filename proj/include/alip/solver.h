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

// Exact solvers for the per-timestep program and the refinement LP.
//
// Optimality and ties: an assignment is optimal when its residual is within
// kDeltaSlack of the smallest feasible residual. Among optimal assignments
// the winner is the lexicographically smallest vector of per-appliance
// choices in model order, where the choices of appliance j are ranked
// state 1 < state 2 < ... < state l_j < OFF. Both engines apply the same
// rule, so their outputs are identical, not merely equal in cost.

#ifndef ALIP_SOLVER_H_
#define ALIP_SOLVER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alip/formulation.h"
#include "alip/model.h"

namespace alip {

inline constexpr double kDeltaSlack = 1e-9;

// Allowed state codes per appliance. An empty inner list means the full
// domain {1..l_j, OFF}.
using Domains = std::vector<std::vector<int>>;

// True when `a` wins the tie-break against `b`.
bool PreferredOver(std::span<const std::uint8_t> a,
                   std::span<const std::uint8_t> b);

struct BranchAndBoundStats {
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
};

// Depth-first branch and bound over one-hot appliance groups. Appliances are
// branched in descending order of their largest rating; within an appliance
// the listed states are tried first and OFF last. A node is pruned when the
// interval of attainable totals cannot come within the incumbent residual.
// Throws kInfeasible when no assignment satisfies the rows.
StateAssignment SolveBranchAndBound(const MilpInstance& instance,
                                    const HouseholdModel& model,
                                    const Domains* domains = nullptr,
                                    BranchAndBoundStats* stats = nullptr);

inline constexpr std::uint64_t kDefaultExhaustiveCap = 10'000'000;

// Enumerates every combination of per-appliance choices. Throws
// kSearchSpaceTooLarge above `cap` combinations and kInfeasible when no
// combination is feasible.
StateAssignment SolveExhaustive(const HouseholdModel& model, double z,
                                const Enhancements& enhancements,
                                const Domains* domains = nullptr,
                                std::uint64_t cap = kDefaultExhaustiveCap);

// Transient refinement of one timestep. Indices in p1 / p2 are flat state
// indices; lower / upper / y are aligned with p2.
struct RefinementProblem {
  double z_residual = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  IndexSet p1;
  std::vector<double> fixed_values;
  IndexSet p2;
};

// Splits the active states of b into steady (p1) and transient (p2) sets and
// subtracts the steady draw from z.
RefinementProblem MakeRefinementProblem(const HouseholdModel& model,
                                        std::span<const std::uint8_t> b,
                                        double z);

struct RefinementSolution {
  std::vector<double> y;
  double residual = 0.0;  // optimal |z_residual - sum(y)|
};

// Solves min |z' - sum y| over the box with the simplex method. The returned
// point is the canonical optimum: the optimal total is distributed from the
// lower bounds upward in index order. Throws kEmptyProblem when p2 is empty.
RefinementSolution SolveRefinementLp(const RefinementProblem& problem);

// Closed-form optimum: start at the lower bounds and spend
// max(0, min(z', sum upper) - sum lower) greedily in index order.
std::vector<double> RefineOracle(const RefinementProblem& problem);

}  // namespace alip

#endif  // ALIP_SOLVER_H_
