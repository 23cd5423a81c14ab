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

// Disaggregation accuracy.
//
//   AC_i = 1 - sum_k |s_k[i] - est_k[i]| / (2 sum_k |s_k[i]|)
//   ACC  = 1 - sum_k sum_i |s_k[i] - est_k[i]| / (2 sum_k sum_i |s_k[i]|)
//
// Both are at most 1 and become negative once the error mass exceeds twice
// the truth mass.

#ifndef ALIP_METRICS_H_
#define ALIP_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "alip/dense_matrix.h"

namespace alip {

// Throws kLengthMismatch or kZeroGroundTruth.
double Ac(std::span<const double> truth, std::span<const double> estimate);
double Acc(const DenseMatrix& truth, const DenseMatrix& estimate);

struct ErrorMass {
  double error = 0.0;  // sum |truth - estimate|
  double truth = 0.0;  // sum |truth|

  // nullopt when truth mass is zero.
  std::optional<double> accuracy() const;
};

struct BlockScore {
  std::size_t start = 0;
  std::size_t length = 0;
  bool partial = false;
  std::vector<ErrorMass> appliances;
  ErrorMass overall;
};

struct AccuracyReport {
  std::vector<ErrorMass> appliances;
  ErrorMass overall;
  std::vector<BlockScore> blocks;

  std::optional<double> ac(std::size_t i) const { return appliances[i].accuracy(); }
  std::optional<double> acc() const { return overall.accuracy(); }
};

// Whole-series and per-block scores. The last block is flagged partial when
// T is not a multiple of block_size.
AccuracyReport Score(const DenseMatrix& truth, const DenseMatrix& estimate,
                     std::size_t block_size);

}  // namespace alip

#endif  // ALIP_METRICS_H_
