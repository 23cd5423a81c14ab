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

// Dense two-phase primal simplex.
//
//   minimize   c.x
//   subject to A x <= b,  x >= lower
//
// Variables are shifted to x' = x - lower >= 0, one slack is added per row,
// and rows with a negative right-hand side get an artificial variable for
// phase one. Bland's rule is used for both entering and leaving choices, so
// the method terminates on degenerate problems and is deterministic.

#ifndef ALIP_SIMPLEX_H_
#define ALIP_SIMPLEX_H_

#include <span>
#include <vector>

#include "alip/dense_matrix.h"

namespace alip {

struct LinearProgram {
  std::vector<double> c;
  DenseMatrix A;
  std::vector<double> b;
  std::vector<double> lower;  // empty means all zeros
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

LpResult SolveSimplex(const LinearProgram& lp);

}  // namespace alip

#endif  // ALIP_SIMPLEX_H_
