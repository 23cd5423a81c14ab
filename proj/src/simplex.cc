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

#include "alip/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace alip {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-10;
constexpr int kMaxIterations = 100000;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows, cols), rhs_(rows, 0.0),
        basis_(rows, 0), obj_(cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_(r, c); }
  double& rhs(std::size_t r) { return rhs_[r]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return rows_; }

  // Loads the reduced-cost row for `cost` given the current basis.
  void SetCost(std::span<const double> cost) {
    obj_value_ = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) obj_[c] = cost[c];
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) obj_[c] -= cb * t_(r, c);
      obj_value_ += cb * rhs_[r];
    }
  }

  void Pivot(std::size_t pr, std::size_t pc) {
    const double p = t_(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) t_(pr, c) /= p;
    rhs_[pr] /= p;
    t_(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double factor = t_(r, pc);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) t_(r, c) -= factor * t_(pr, c);
      rhs_[r] -= factor * rhs_[pr];
      t_(r, pc) = 0.0;
    }
    const double factor = obj_[pc];
    if (factor != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) obj_[c] -= factor * t_(pr, c);
      obj_value_ += factor * rhs_[pr];
      obj_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Runs Bland-rule iterations over columns [0, usable). Returns false when
  // the objective is unbounded below.
  bool Optimize(std::size_t usable, int& iterations) {
    while (true) {
      if (++iterations > kMaxIterations) {
        throw std::runtime_error("simplex iteration limit exceeded");
      }
      std::size_t enter = usable;
      for (std::size_t c = 0; c < usable; ++c) {
        if (obj_[c] < -kCostEps) {
          enter = c;
          break;
        }
      }
      if (enter == usable) return true;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs_[r] / a;
        if (ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return false;
      Pivot(leave, enter);
    }
  }

  double objective() const { return obj_value_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  DenseMatrix t_;
  std::vector<double> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<double> obj_;
  double obj_value_ = 0.0;
};

}  // namespace

LpResult SolveSimplex(const LinearProgram& lp) {
  const std::size_t n = lp.c.size();
  const std::size_t m = lp.A.rows();
  if (lp.A.cols() != n || lp.b.size() != m ||
      (!lp.lower.empty() && lp.lower.size() != n)) {
    throw std::invalid_argument("SolveSimplex: inconsistent dimensions");
  }
  std::vector<double> lower = lp.lower.empty() ? std::vector<double>(n, 0.0)
                                               : lp.lower;

  std::vector<double> shifted_rhs(m);
  std::size_t artificials = 0;
  for (std::size_t r = 0; r < m; ++r) {
    double v = lp.b[r];
    for (std::size_t c = 0; c < n; ++c) v -= lp.A(r, c) * lower[c];
    shifted_rhs[r] = v;
    if (v < 0.0) ++artificials;
  }

  // Columns: [x' (n) | slack (m) | artificial (artificials)].
  const std::size_t cols = n + m + artificials;
  Tableau tab(m, cols);
  std::size_t next_art = n + m;
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = shifted_rhs[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = sign * lp.A(r, c);
    tab.at(r, n + r) = sign;
    tab.rhs(r) = sign * shifted_rhs[r];
    if (sign < 0.0) {
      tab.at(r, next_art) = 1.0;
      tab.basis(r) = next_art++;
    } else {
      tab.basis(r) = n + r;
    }
  }

  LpResult result;
  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = n + m; c < cols; ++c) phase1[c] = 1.0;
    tab.SetCost(phase1);
    tab.Optimize(n + m, result.iterations);
    double scale = 1.0;
    for (double v : shifted_rhs) scale = std::max(scale, std::abs(v));
    if (tab.objective() > 1e-9 * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis(r) < n + m) continue;
      for (std::size_t c = 0; c < n + m; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotEps) {
          tab.Pivot(r, c);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  std::copy(lp.c.begin(), lp.c.end(), phase2.begin());
  tab.SetCost(phase2);
  if (!tab.Optimize(n + m, result.iterations)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  result.status = LpStatus::kOptimal;
  result.x = lower;
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis(r) < n) result.x[tab.basis(r)] += tab.rhs(r);
  }
  result.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) result.objective += lp.c[c] * result.x[c];
  return result;
}

}  // namespace alip
