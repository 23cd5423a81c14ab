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

#include "alip/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "alip/error.h"
#include "alip/simplex.h"

namespace alip {

bool PreferredOver(std::span<const std::uint8_t> a,
                   std::span<const std::uint8_t> b) {
  // A 1 at the first differing flat index means a lower state code of the
  // first differing appliance (OFF is the all-zero slice and ranks last).
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

namespace {

std::vector<int> FullDomain(const HouseholdModel& model, std::size_t j) {
  std::vector<int> codes;
  for (int c = 1; c <= static_cast<int>(model.num_states_of(j)); ++c) {
    codes.push_back(c);
  }
  codes.push_back(kOffCode);
  return codes;
}

// Rank used to order a domain: listed states ascending, OFF last.
int ChoiceRank(int code) { return code == kOffCode ? 1 << 30 : code; }

std::vector<std::vector<int>> ResolveDomains(const HouseholdModel& model,
                                             const Domains* domains) {
  std::vector<std::vector<int>> out(model.num_appliances());
  if (domains && domains->size() != model.num_appliances()) {
    throw Error(ErrorCode::kLengthMismatch, "domain count != appliance count");
  }
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    if (domains && !(*domains)[j].empty()) {
      out[j] = (*domains)[j];
      std::sort(out[j].begin(), out[j].end(),
                [](int a, int b) { return ChoiceRank(a) < ChoiceRank(b); });
      out[j].erase(std::unique(out[j].begin(), out[j].end()), out[j].end());
    } else {
      out[j] = FullDomain(model, j);
    }
  }
  return out;
}

double ResidualOf(const HouseholdModel& model, std::span<const std::uint8_t> b,
                  double z) {
  double draw = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i]) draw += model.ratings()[i];
  }
  return std::abs(z - draw);
}

// Keeps every leaf within slack of the running best, then picks the
// preferred one among those within slack of the final best.
class Incumbents {
 public:
  double best() const { return best_; }

  void Offer(const std::vector<std::uint8_t>& b, double delta) {
    if (delta > best_ + kDeltaSlack) return;
    if (delta < best_) {
      best_ = delta;
      std::erase_if(pool_, [this](const auto& p) {
        return p.second > best_ + kDeltaSlack;
      });
    }
    pool_.emplace_back(b, delta);
  }

  std::optional<std::pair<std::vector<std::uint8_t>, double>> Winner() const {
    const std::pair<std::vector<std::uint8_t>, double>* win = nullptr;
    for (const auto& p : pool_) {
      if (p.second > best_ + kDeltaSlack) continue;
      if (!win || PreferredOver(p.first, win->first)) win = &p;
    }
    if (!win) return std::nullopt;
    return *win;
  }

 private:
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::vector<std::uint8_t>, double>> pool_;
};

StateAssignment Finish(const HouseholdModel& model,
                       const std::vector<std::uint8_t>& b, double delta,
                       double z) {
  StateAssignment out = MakeAssignment(model, StateCodes(model, b), z);
  out.delta = delta;
  return out;
}

// Constraint rows lifted out of an instance, as index sets.
struct GroupRow {
  IndexSet members;
  double rhs = 1.0;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpInstance& inst, const HouseholdModel& model,
                 const Domains* domains, BranchAndBoundStats* stats)
      : model_(model), z_(inst.z), stats_(stats) {
    const std::size_t m = model.num_states();
    if (inst.num_vars() != m + 1) {
      throw Error(ErrorCode::kLengthMismatch,
                  "instance does not match model dimensions");
    }
    // Ratings are read back from the residual row so the search uses exactly
    // the coefficients of the instance.
    ratings_.assign(m, 0.0);
    for (std::size_t r = 0; r < inst.A.rows(); ++r) {
      if (inst.row_kind[r] == RowKind::kResidualUpper) {
        for (std::size_t i = 0; i < m; ++i) ratings_[i] = inst.A(r, i + 1);
      } else if (inst.row_kind[r] != RowKind::kResidualLower) {
        leq_.push_back(ToGroup(inst.A.row(r), inst.e[r]));
      }
    }
    for (std::size_t r = 0; r < inst.A_eq.rows(); ++r) {
      eq_.push_back(ToGroup(inst.A_eq.row(r), inst.e_eq[r]));
    }

    domains_ = ResolveDomains(model, domains);
    // An equality row covering exactly one appliance's states rules out OFF.
    for (const GroupRow& g : eq_) {
      if (g.rhs < 1.0) continue;
      const std::size_t j = model.owner(g.members.front());
      bool whole = g.members.size() == model.num_states_of(j);
      for (std::size_t i : g.members) whole &= model.owner(i) == j;
      if (whole) std::erase(domains_[j], kOffCode);
    }

    const std::size_t n = model.num_appliances();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<double> max_rating(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (int c : domains_[j]) {
        if (c != kOffCode) {
          max_rating[j] = std::max(max_rating[j], Rating(j, c));
        }
      }
    }
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return max_rating[a] > max_rating[b];
    });

    // Suffix interval of attainable draw over order_[d..n).
    suffix_min_.assign(n + 1, 0.0);
    suffix_max_.assign(n + 1, 0.0);
    for (std::size_t d = n; d-- > 0;) {
      const std::size_t j = order_[d];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int c : domains_[j]) {
        lo = std::min(lo, Rating(j, c));
        hi = std::max(hi, Rating(j, c));
      }
      if (domains_[j].empty()) lo = hi = 0.0;
      suffix_min_[d] = suffix_min_[d + 1] + lo;
      suffix_max_[d] = suffix_max_[d + 1] + hi;
    }

    // Which rows each flat index touches.
    touches_leq_.resize(m);
    touches_eq_.resize(m);
    for (std::size_t g = 0; g < leq_.size(); ++g) {
      for (std::size_t i : leq_[g].members) touches_leq_[i].push_back(g);
    }
    for (std::size_t g = 0; g < eq_.size(); ++g) {
      for (std::size_t i : eq_[g].members) touches_eq_[i].push_back(g);
    }
    // Undecided appliances that can still contribute to each equality row.
    eq_open_.assign(eq_.size(), 0);
    for (std::size_t g = 0; g < eq_.size(); ++g) {
      std::vector<char> seen(n, 0);
      for (std::size_t i : eq_[g].members) {
        const std::size_t j = model.owner(i);
        if (!seen[j]) {
          seen[j] = 1;
          ++eq_open_[g];
        }
      }
    }
    leq_count_.assign(leq_.size(), 0);
    eq_count_.assign(eq_.size(), 0);
    b_.assign(m, 0);
  }

  StateAssignment Solve() {
    Descend(0, 0.0);
    const auto win = incumbents_.Winner();
    if (!win) {
      throw Error(ErrorCode::kInfeasible,
                  "no assignment satisfies the constraint rows");
    }
    return Finish(model_, win->first, win->second, z_);
  }

 private:
  GroupRow ToGroup(std::span<const double> row, double rhs) const {
    GroupRow g;
    g.rhs = rhs;
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i] != 0.0) g.members.push_back(i - 1);
    }
    return g;
  }

  double Rating(std::size_t j, int code) const {
    return code == kOffCode ? 0.0 : ratings_[model_.flat_index(j, code)];
  }

  void Descend(std::size_t depth, double committed) {
    if (stats_) ++stats_->nodes;
    const double lo = committed + suffix_min_[depth];
    const double hi = committed + suffix_max_[depth];
    const double bound = std::max({0.0, lo - z_, z_ - hi});
    if (bound > incumbents_.best() + 2 * kDeltaSlack) return;

    if (depth == order_.size()) {
      for (std::size_t g = 0; g < eq_.size(); ++g) {
        if (static_cast<double>(eq_count_[g]) != eq_[g].rhs) return;
      }
      if (stats_) ++stats_->leaves;
      incumbents_.Offer(b_, ResidualOf(model_, b_, z_));
      return;
    }

    const std::size_t j = order_[depth];
    CloseEqualityRows(j, -1);
    for (int code : domains_[j]) {
      if (code == kOffCode) {
        if (EqualityRowsSatisfiable()) Descend(depth + 1, committed);
        continue;
      }
      const std::size_t i = model_.flat_index(j, code);
      if (!Place(i)) {
        Remove(i);
        continue;
      }
      if (EqualityRowsSatisfiable()) Descend(depth + 1, committed + ratings_[i]);
      Remove(i);
    }
    CloseEqualityRows(j, +1);
  }

  // Marks appliance j as decided (-1) or undecided again (+1) for every
  // equality row it participates in.
  void CloseEqualityRows(std::size_t j, int delta) {
    for (std::size_t g = 0; g < eq_.size(); ++g) {
      for (std::size_t i : eq_[g].members) {
        if (model_.owner(i) == j) {
          eq_open_[g] += delta;
          break;
        }
      }
    }
  }

  bool EqualityRowsSatisfiable() const {
    for (std::size_t g = 0; g < eq_.size(); ++g) {
      const double count = eq_count_[g];
      if (count > eq_[g].rhs) return false;
      if (count + eq_open_[g] < eq_[g].rhs) return false;
    }
    return true;
  }

  // Sets b[i] and updates row counts; false if an inequality row overflows.
  bool Place(std::size_t i) {
    b_[i] = 1;
    bool ok = true;
    for (std::size_t g : touches_leq_[i]) {
      ++leq_count_[g];
      if (static_cast<double>(leq_count_[g]) > leq_[g].rhs) ok = false;
    }
    for (std::size_t g : touches_eq_[i]) ++eq_count_[g];
    return ok;
  }

  void Remove(std::size_t i) {
    b_[i] = 0;
    for (std::size_t g : touches_leq_[i]) --leq_count_[g];
    for (std::size_t g : touches_eq_[i]) --eq_count_[g];
  }

  const HouseholdModel& model_;
  double z_;
  BranchAndBoundStats* stats_;
  std::vector<double> ratings_;
  std::vector<GroupRow> leq_;
  std::vector<GroupRow> eq_;
  std::vector<std::vector<int>> domains_;
  std::vector<std::size_t> order_;
  std::vector<double> suffix_min_;
  std::vector<double> suffix_max_;
  std::vector<std::vector<std::size_t>> touches_leq_;
  std::vector<std::vector<std::size_t>> touches_eq_;
  std::vector<int> eq_open_;
  std::vector<int> leq_count_;
  std::vector<int> eq_count_;
  std::vector<std::uint8_t> b_;
  Incumbents incumbents_;
};

}  // namespace

StateAssignment SolveBranchAndBound(const MilpInstance& instance,
                                    const HouseholdModel& model,
                                    const Domains* domains,
                                    BranchAndBoundStats* stats) {
  return BranchAndBound(instance, model, domains, stats).Solve();
}

StateAssignment SolveExhaustive(const HouseholdModel& model, double z,
                                const Enhancements& enhancements,
                                const Domains* domains, std::uint64_t cap) {
  const std::vector<std::vector<int>> dom = ResolveDomains(model, domains);
  std::uint64_t total = 1;
  for (const auto& d : dom) {
    if (d.empty() || total > cap / d.size()) {
      throw Error(ErrorCode::kSearchSpaceTooLarge,
                  "search space exceeds cap of " + std::to_string(cap));
    }
    total *= d.size();
  }

  const std::size_t n = model.num_appliances();
  std::vector<std::size_t> digit(n, 0);
  std::vector<int> codes(n);
  Incumbents incumbents;
  for (std::uint64_t step = 0; step < total; ++step) {
    for (std::size_t j = 0; j < n; ++j) codes[j] = dom[j][digit[j]];
    const StateAssignment a = MakeAssignment(model, codes, z);
    const Evaluation ev = Evaluate(model, a.b, z, enhancements);
    if (ev.feasible) incumbents.Offer(a.b, ev.delta);
    for (std::size_t j = n; j-- > 0;) {
      if (++digit[j] < dom[j].size()) break;
      digit[j] = 0;
    }
  }
  const auto win = incumbents.Winner();
  if (!win) {
    throw Error(ErrorCode::kInfeasible,
                "no assignment satisfies the constraint rows");
  }
  return Finish(model, win->first, win->second, z);
}

RefinementProblem MakeRefinementProblem(const HouseholdModel& model,
                                        std::span<const std::uint8_t> b,
                                        double z) {
  RefinementProblem p;
  double steady = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i]) continue;
    if (model.transient_min()[i] < model.transient_max()[i]) {
      p.p2.push_back(i);
      p.lower.push_back(model.transient_min()[i]);
      p.upper.push_back(model.transient_max()[i]);
    } else {
      p.p1.push_back(i);
      p.fixed_values.push_back(model.ratings()[i]);
      steady += model.ratings()[i];
    }
  }
  p.z_residual = z - steady;
  return p;
}

RefinementSolution SolveRefinementLp(const RefinementProblem& problem) {
  const std::size_t k = problem.p2.size();
  if (k == 0 || problem.lower.size() != k || problem.upper.size() != k) {
    throw Error(ErrorCode::kEmptyProblem, "no transient states to refine");
  }
  // x = [delta; y], rows: -(h'+u1), (h'-u1), [0 -I], [0 I].
  LinearProgram lp;
  lp.c.assign(k + 1, 0.0);
  lp.c[0] = 1.0;
  lp.A = DenseMatrix(k + 1);
  lp.A.AppendRow();
  lp.A.AppendRow();
  lp.A(0, 0) = -1.0;
  lp.A(1, 0) = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    lp.A(0, i + 1) = -1.0;
    lp.A(1, i + 1) = 1.0;
  }
  lp.b = {-problem.z_residual, problem.z_residual};
  for (std::size_t i = 0; i < k; ++i) {
    lp.A.AppendRow()[i + 1] = -1.0;
    lp.b.push_back(-problem.lower[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    lp.A.AppendRow()[i + 1] = 1.0;
    lp.b.push_back(problem.upper[i]);
  }
  lp.lower.assign(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) lp.lower[i + 1] = problem.lower[i];

  const LpResult res = SolveSimplex(lp);
  if (res.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInfeasible, "refinement LP has no optimum");
  }

  // Any box point with the optimal total is optimal; pick the canonical one.
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += res.x[i + 1];
  RefinementSolution out;
  out.y = problem.lower;
  double spare = total;
  for (double lo : problem.lower) spare -= lo;
  for (std::size_t i = 0; i < k && spare > 0.0; ++i) {
    const double room = problem.upper[i] - problem.lower[i];
    const double add = std::min(room, spare);
    // lower + room can round past upper; a full slot takes upper itself.
    out.y[i] = add >= room ? problem.upper[i] : std::min(out.y[i] + add, problem.upper[i]);
    spare -= add;
  }
  out.residual = res.x[0];
  return out;
}

std::vector<double> RefineOracle(const RefinementProblem& problem) {
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  for (double v : problem.lower) sum_lower += v;
  for (double v : problem.upper) sum_upper += v;
  double budget =
      std::max(0.0, std::min(problem.z_residual, sum_upper) - sum_lower);
  std::vector<double> y = problem.lower;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double room = problem.upper[i] - problem.lower[i];
    const double add = std::min(budget, room);
    y[i] = add >= room ? problem.upper[i] : std::min(y[i] + add, problem.upper[i]);
    budget -= add;
  }
  return y;
}

}  // namespace alip
