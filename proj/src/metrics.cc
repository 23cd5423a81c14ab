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

#include "alip/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "alip/error.h"

namespace alip {

std::optional<double> ErrorMass::accuracy() const {
  if (truth == 0.0) return std::nullopt;
  return 1.0 - error / (2.0 * truth);
}

double Ac(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size()) {
    throw Error(ErrorCode::kLengthMismatch, "truth and estimate lengths differ");
  }
  ErrorMass mass;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    mass.error += std::abs(truth[k] - estimate[k]);
    mass.truth += std::abs(truth[k]);
  }
  const auto ac = mass.accuracy();
  if (!ac) throw Error(ErrorCode::kZeroGroundTruth, "ground truth is all zero");
  return *ac;
}

double Acc(const DenseMatrix& truth, const DenseMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "truth and estimate shapes differ");
  }
  ErrorMass mass;
  for (std::size_t k = 0; k < truth.rows(); ++k) {
    for (std::size_t i = 0; i < truth.cols(); ++i) {
      mass.error += std::abs(truth(k, i) - estimate(k, i));
      mass.truth += std::abs(truth(k, i));
    }
  }
  const auto acc = mass.accuracy();
  if (!acc) throw Error(ErrorCode::kZeroGroundTruth, "ground truth is all zero");
  return *acc;
}

AccuracyReport Score(const DenseMatrix& truth, const DenseMatrix& estimate,
                     std::size_t block_size) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "truth and estimate shapes differ");
  }
  if (block_size == 0) {
    throw Error(ErrorCode::kInvalidConfig, "block size must be positive");
  }
  const std::size_t T = truth.rows();
  const std::size_t n = truth.cols();
  AccuracyReport report;
  report.appliances.resize(n);
  for (std::size_t start = 0; start < T; start += block_size) {
    BlockScore block;
    block.start = start;
    block.length = std::min(block_size, T - start);
    block.partial = block.length < block_size;
    block.appliances.resize(n);
    for (std::size_t k = start; k < start + block.length; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double err = std::abs(truth(k, i) - estimate(k, i));
        const double mass = std::abs(truth(k, i));
        block.appliances[i].error += err;
        block.appliances[i].truth += mass;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      block.overall.error += block.appliances[i].error;
      block.overall.truth += block.appliances[i].truth;
    }
    report.blocks.push_back(std::move(block));
  }
  // Totals are accumulated sample by sample, not from block sums, so they
  // equal Ac / Acc bit for bit.
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      report.appliances[i].error += std::abs(truth(k, i) - estimate(k, i));
      report.appliances[i].truth += std::abs(truth(k, i));
    }
  }
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      report.overall.error += std::abs(truth(k, i) - estimate(k, i));
      report.overall.truth += std::abs(truth(k, i));
    }
  }
  return report;
}

}  // namespace alip
