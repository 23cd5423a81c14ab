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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

namespace alip {
namespace {

LinearProgram Make(std::vector<double> c, std::vector<std::vector<double>> rows,
                   std::vector<double> b, std::vector<double> lower = {}) {
  LinearProgram lp;
  lp.c = std::move(c);
  lp.A = DenseMatrix(lp.c.size());
  for (const auto& r : rows) {
    auto dst = lp.A.AppendRow();
    std::copy(r.begin(), r.end(), dst.begin());
  }
  lp.b = std::move(b);
  lp.lower = std::move(lower);
  return lp;
}

TEST(Simplex, TextbookMaximum) {
  // max x + y  s.t. x + 2y <= 4, 3x + y <= 6.
  const LpResult r = SolveSimplex(Make({-1, -1}, {{1, 2}, {3, 1}}, {4, 6}));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
  EXPECT_NEAR(r.objective, -2.8, 1e-12);
}

TEST(Simplex, NegativeRhsNeedsPhaseOne) {
  // min x  s.t. x >= 3 written as -x <= -3.
  const LpResult r = SolveSimplex(Make({1}, {{-1}}, {-3}));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.x[0], 3.0);
}

TEST(Simplex, LowerBoundsShift) {
  const LpResult r = SolveSimplex(Make({1, 1}, {{-1, -1}}, {-10}, {4, 2}));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.objective, 10.0);
  EXPECT_GE(r.x[0], 4.0);
  EXPECT_GE(r.x[1], 2.0);
}

TEST(Simplex, Infeasible) {
  EXPECT_EQ(SolveSimplex(Make({1}, {{1}}, {-1})).status, LpStatus::kInfeasible);
  EXPECT_EQ(SolveSimplex(Make({1}, {{1}}, {2}, {5})).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  EXPECT_EQ(SolveSimplex(Make({-1, 0}, {{0, 1}}, {1})).status, LpStatus::kUnbounded);
}

TEST(Simplex, BealeCyclingExampleTerminates) {
  const LpResult r = SolveSimplex(Make({-0.75, 20, -0.5, 6},
                                       {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}},
                                       {0, 0, 1}));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-12);
}

// Two-variable oracle: the optimum of a bounded feasible LP sits on a vertex
// formed by two active constraints (including x >= lower).
double VertexOracle(const LinearProgram& lp, bool& feasible) {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t r = 0; r < lp.A.rows(); ++r) {
    rows.push_back({lp.A(r, 0), lp.A(r, 1)});
    rhs.push_back(lp.b[r]);
  }
  rows.push_back({-1, 0});
  rhs.push_back(-lp.lower[0]);
  rows.push_back({0, -1});
  rhs.push_back(-lp.lower[1]);
  double best = std::numeric_limits<double>::infinity();
  feasible = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (rhs[i] * rows[j][1] - rows[i][1] * rhs[j]) / det;
      const double y = (rows[i][0] * rhs[j] - rhs[i] * rows[j][0]) / det;
      bool ok = true;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k][0] * x + rows[k][1] * y > rhs[k] + 1e-7) ok = false;
      }
      if (!ok) continue;
      feasible = true;
      best = std::min(best, lp.c[0] * x + lp.c[1] * y);
    }
  }
  return best;
}

TEST(Simplex, MatchesVertexEnumerationOnBoxedProblems) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  int solved = 0;
  for (int t = 0; t < 400; ++t) {
    LinearProgram lp;
    lp.c = {coef(rng), coef(rng)};
    lp.A = DenseMatrix(2);
    // A box keeps the problem bounded; extra random rows cut it.
    const double lo0 = coef(rng), lo1 = coef(rng);
    lp.lower = {lo0, lo1};
    for (const auto& r : std::vector<std::vector<double>>{{1, 0}, {0, 1}}) {
      auto d = lp.A.AppendRow();
      d[0] = r[0];
      d[1] = r[1];
    }
    lp.b = {lo0 + 10.0, lo1 + 10.0};
    for (int k = 0; k < 3; ++k) {
      auto d = lp.A.AppendRow();
      d[0] = coef(rng);
      d[1] = coef(rng);
      lp.b.push_back(coef(rng) * 4.0);
    }
    bool feasible = false;
    const double expect = VertexOracle(lp, feasible);
    const LpResult r = SolveSimplex(lp);
    if (!feasible) {
      EXPECT_EQ(r.status, LpStatus::kInfeasible) << "trial " << t;
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << t;
    EXPECT_NEAR(r.objective, expect, 1e-7) << "trial " << t;
    ++solved;
  }
  EXPECT_GT(solved, 100);
}

}  // namespace
}  // namespace alip
