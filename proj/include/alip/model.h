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

// Appliance and household modeling.
//
// An appliance has l >= 1 non-OFF states, each with a steady rating and a
// [transient_min, transient_max] band. OFF is implicit: it is the all-zero
// slice of the indicator vector and is never listed. Compiling a list of
// appliances concatenates their ratings into one vector r of length
// m = sum(l_i); appliance j owns the flat indices [offset_j, offset_j + l_j).
//
// Per-appliance state codes used throughout the library: 0 is OFF and
// 1..l are the listed states in order.

#ifndef ALIP_MODEL_H_
#define ALIP_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace alip {

inline constexpr int kOffCode = 0;
inline constexpr const char* kOffLabel = "OFF";

// Sorted, duplicate-free set of flat state indices.
using IndexSet = std::vector<std::size_t>;

struct StateSpec {
  std::string label;
  double rating = 0.0;
  double transient_min = 0.0;
  double transient_max = 0.0;

  bool is_transient() const { return transient_min < transient_max; }

  // Non-transient state with rating as both bounds.
  static StateSpec Steady(std::string label, double rating) {
    return {std::move(label), rating, rating, rating};
  }
};

struct ApplianceSpec {
  std::string id;
  std::vector<StateSpec> states;
  bool always_on = false;
  // Directed edges between state labels ("OFF" names the implicit state).
  // An empty list means every transition is legal. Self-loops are always
  // added during compilation.
  std::vector<std::pair<std::string, std::string>> std_edges;
};

struct CompileOptions {
  double tolerance = 1.0;
  int max_subset = 3;
  // When set, replaces the automatically detected groups.
  std::optional<std::vector<IndexSet>> combo_override;
  std::optional<std::vector<IndexSet>> alias_override;
};

class HouseholdModel {
 public:
  std::size_t num_appliances() const { return appliances_.size(); }
  std::size_t num_states() const { return ratings_.size(); }

  const std::vector<ApplianceSpec>& appliances() const { return appliances_; }
  const ApplianceSpec& appliance(std::size_t j) const { return appliances_[j]; }
  std::size_t num_states_of(std::size_t j) const {
    return appliances_[j].states.size();
  }

  std::span<const double> ratings() const { return ratings_; }
  std::span<const double> transient_min() const { return transient_min_; }
  std::span<const double> transient_max() const { return transient_max_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  // Appliance that owns flat index i.
  std::size_t owner(std::size_t i) const { return owner_[i]; }
  std::span<const std::size_t> owners() const { return owner_; }

  const std::vector<IndexSet>& combo_groups() const { return combo_groups_; }
  const std::vector<IndexSet>& alias_groups() const { return alias_groups_; }
  const std::vector<IndexSet>& always_on_rows() const { return always_on_rows_; }

  // Flat index of state code `code` (1-based) of appliance j.
  std::size_t flat_index(std::size_t j, int code) const {
    return offsets_[j] + static_cast<std::size_t>(code - 1);
  }
  double rating(std::size_t j, int code) const {
    return code == kOffCode ? 0.0 : ratings_[flat_index(j, code)];
  }
  double max_rating(std::size_t j) const { return max_rating_[j]; }
  // Smallest draw appliance j can have: 0 unless it is always on.
  double min_draw(std::size_t j) const { return min_draw_[j]; }

  bool CanTransition(std::size_t j, int from, int to) const;
  // Codes reachable from `from` in one step, ascending.
  std::vector<int> Successors(std::size_t j, int from) const;

  // Label for a state code, "OFF" for 0.
  const std::string& label(std::size_t j, int code) const;
  // Code for a label, or nullopt.
  std::optional<int> code_of(std::size_t j, const std::string& label) const;
  std::optional<std::size_t> index_of(const std::string& appliance_id) const;

  friend HouseholdModel Compile(std::vector<ApplianceSpec> specs,
                                const CompileOptions& options);

 private:
  HouseholdModel() = default;

  std::vector<ApplianceSpec> appliances_;
  std::vector<double> ratings_;
  std::vector<double> transient_min_;
  std::vector<double> transient_max_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> owner_;
  std::vector<double> max_rating_;
  std::vector<double> min_draw_;
  // transitions_[j] is a (l_j+1)^2 row-major adjacency over state codes.
  std::vector<std::vector<char>> transitions_;
  std::vector<IndexSet> combo_groups_;
  std::vector<IndexSet> alias_groups_;
  std::vector<IndexSet> always_on_rows_;
};

// Validates the specs and builds the immutable model. Throws Error with
// kEmptyModel, kNonPositiveRating, kBoundViolation or kInvalidSpec.
HouseholdModel Compile(std::vector<ApplianceSpec> specs,
                       const CompileOptions& options = {});

// Groups {target} + subset where a target rating is matched within `tol` by
// the sum of 2..max_subset ratings taken from distinct appliances other than
// the target's owner. Output is sorted and de-duplicated.
std::vector<IndexSet> DetectCombos(std::span<const double> ratings,
                                   std::span<const std::size_t> owners,
                                   double tol, int max_subset);

// Pairs {a, b} where state a's rating lies within `tol` of the gap between
// state b's steady rating and one of its transient bounds, and a, b belong to
// different appliances.
std::vector<IndexSet> DetectAliases(std::span<const double> ratings,
                                    std::span<const double> transient_min,
                                    std::span<const double> transient_max,
                                    std::span<const std::size_t> owners,
                                    double tol);

}  // namespace alip

#endif  // ALIP_MODEL_H_
