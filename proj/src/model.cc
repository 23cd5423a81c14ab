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

#include "alip/model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>

#include "alip/error.h"

namespace alip {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyModel: return "EmptyModel";
    case ErrorCode::kNonPositiveRating: return "NonPositiveRating";
    case ErrorCode::kBoundViolation: return "BoundViolation";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::kEmptyProblem: return "EmptyProblem";
    case ErrorCode::kNoReachableState: return "NoReachableState";
    case ErrorCode::kZeroGroundTruth: return "ZeroGroundTruth";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string Where(const ApplianceSpec& a, const StateSpec& s) {
  return "appliance '" + a.id + "' state '" + s.label + "'";
}

void ValidateAppliance(const ApplianceSpec& a) {
  if (a.id.empty()) throw Error(ErrorCode::kInvalidSpec, "appliance id is empty");
  if (a.states.empty()) {
    throw Error(ErrorCode::kInvalidSpec,
                "appliance '" + a.id + "' has no non-OFF states");
  }
  std::set<std::string> labels;
  for (const StateSpec& s : a.states) {
    if (!(s.rating > 0.0) || !std::isfinite(s.rating)) {
      throw Error(ErrorCode::kNonPositiveRating, Where(a, s));
    }
    if (!std::isfinite(s.transient_min) || !std::isfinite(s.transient_max) ||
        s.transient_min > s.rating || s.rating > s.transient_max) {
      throw Error(ErrorCode::kBoundViolation,
                  Where(a, s) + " needs transient_min <= rating <= transient_max");
    }
    if (s.label.empty() || s.label == kOffLabel) {
      throw Error(ErrorCode::kInvalidSpec, Where(a, s) + " has a reserved label");
    }
    if (!labels.insert(s.label).second) {
      throw Error(ErrorCode::kInvalidSpec, Where(a, s) + " is duplicated");
    }
  }
}

// Enumerates subsets of `pool` (ascending) with distinct owners, excluding
// `banned_owner`, and reports those whose sum is within tol of target.
void ExtendSubset(std::span<const double> ratings,
                  std::span<const std::size_t> owners, double target,
                  double tol, int max_subset, std::size_t banned_owner,
                  std::size_t start, double sum, IndexSet& chosen,
                  std::vector<IndexSet>& out, std::size_t target_index) {
  for (std::size_t i = start; i < ratings.size(); ++i) {
    if (owners[i] == banned_owner) continue;
    bool clash = false;
    for (std::size_t c : chosen) clash |= owners[c] == owners[i];
    if (clash) continue;
    chosen.push_back(i);
    const double s = sum + ratings[i];
    if (chosen.size() >= 2 && std::abs(target - s) <= tol) {
      IndexSet group = chosen;
      group.push_back(target_index);
      std::sort(group.begin(), group.end());
      out.push_back(std::move(group));
    }
    if (static_cast<int>(chosen.size()) < max_subset) {
      ExtendSubset(ratings, owners, target, tol, max_subset, banned_owner,
                   i + 1, s, chosen, out, target_index);
    }
    chosen.pop_back();
  }
}

void SortUnique(std::vector<IndexSet>& groups) {
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
}

}  // namespace

std::vector<IndexSet> DetectCombos(std::span<const double> ratings,
                                   std::span<const std::size_t> owners,
                                   double tol, int max_subset) {
  if (max_subset < 2) {
    throw Error(ErrorCode::kInvalidConfig, "max_subset must be at least 2");
  }
  std::vector<IndexSet> out;
  IndexSet chosen;
  for (std::size_t t = 0; t < ratings.size(); ++t) {
    ExtendSubset(ratings, owners, ratings[t], tol, max_subset, owners[t], 0,
                 0.0, chosen, out, t);
  }
  SortUnique(out);
  return out;
}

std::vector<IndexSet> DetectAliases(std::span<const double> ratings,
                                    std::span<const double> transient_min,
                                    std::span<const double> transient_max,
                                    std::span<const std::size_t> owners,
                                    double tol) {
  std::vector<IndexSet> out;
  for (std::size_t b = 0; b < ratings.size(); ++b) {
    for (double bound : {transient_min[b], transient_max[b]}) {
      const double gap = std::abs(ratings[b] - bound);
      if (gap <= 0.0) continue;
      for (std::size_t a = 0; a < ratings.size(); ++a) {
        if (owners[a] == owners[b]) continue;
        if (std::abs(ratings[a] - gap) <= tol) {
          out.push_back({std::min(a, b), std::max(a, b)});
        }
      }
    }
  }
  SortUnique(out);
  return out;
}

HouseholdModel Compile(std::vector<ApplianceSpec> specs,
                       const CompileOptions& options) {
  if (specs.empty()) throw Error(ErrorCode::kEmptyModel, "no appliances");
  if (!(options.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tolerance must be >= 0");
  }
  std::set<std::string> ids;
  for (const ApplianceSpec& a : specs) {
    ValidateAppliance(a);
    if (!ids.insert(a.id).second) {
      throw Error(ErrorCode::kInvalidSpec, "duplicate appliance id '" + a.id + "'");
    }
  }

  HouseholdModel model;
  model.appliances_ = std::move(specs);
  const std::size_t n = model.appliances_.size();
  model.max_rating_.resize(n);
  model.min_draw_.resize(n);
  model.transitions_.resize(n);

  for (std::size_t j = 0; j < n; ++j) {
    const ApplianceSpec& a = model.appliances_[j];
    model.offsets_.push_back(model.ratings_.size());
    double hi = 0.0;
    double lo = a.states.front().rating;
    for (const StateSpec& s : a.states) {
      model.ratings_.push_back(s.rating);
      model.transient_min_.push_back(s.transient_min);
      model.transient_max_.push_back(s.transient_max);
      model.owner_.push_back(j);
      hi = std::max(hi, s.rating);
      lo = std::min(lo, s.rating);
    }
    model.max_rating_[j] = hi;
    model.min_draw_[j] = a.always_on ? lo : 0.0;

    const std::size_t codes = a.states.size() + 1;
    std::vector<char>& adj = model.transitions_[j];
    adj.assign(codes * codes, a.std_edges.empty() ? 1 : 0);
    for (std::size_t c = 0; c < codes; ++c) adj[c * codes + c] = 1;
    for (const auto& [from, to] : a.std_edges) {
      const auto f = model.code_of(j, from);
      const auto t = model.code_of(j, to);
      if (!f || !t) {
        throw Error(ErrorCode::kInvalidSpec, "appliance '" + a.id +
                                                 "' edge " + from + "->" + to +
                                                 " names an unknown state");
      }
      if (a.always_on && *t == kOffCode && *f != kOffCode) {
        throw Error(ErrorCode::kInvalidSpec,
                    "always-on appliance '" + a.id + "' has an edge into OFF");
      }
      adj[static_cast<std::size_t>(*f) * codes + static_cast<std::size_t>(*t)] = 1;
    }
    if (a.always_on) {
      // An always-on appliance never occupies OFF, so edges into it are moot.
      for (std::size_t c = 1; c < codes; ++c) adj[c * codes] = 0;
    }

    if (a.always_on) {
      IndexSet row;
      for (std::size_t s = 0; s < a.states.size(); ++s) {
        row.push_back(model.offsets_[j] + s);
      }
      model.always_on_rows_.push_back(std::move(row));
    }
  }

  const auto check_groups = [&](const std::vector<IndexSet>& groups,
                                const char* what) {
    for (const IndexSet& g : groups) {
      for (std::size_t i : g) {
        if (i >= model.ratings_.size()) {
          throw Error(ErrorCode::kInvalidSpec,
                      std::string(what) + " group index out of range");
        }
      }
    }
  };
  if (options.combo_override) {
    model.combo_groups_ = *options.combo_override;
    for (IndexSet& g : model.combo_groups_) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    check_groups(model.combo_groups_, "combo");
    SortUnique(model.combo_groups_);
  } else {
    model.combo_groups_ = DetectCombos(model.ratings_, model.owner_,
                                       options.tolerance, options.max_subset);
  }
  if (options.alias_override) {
    model.alias_groups_ = *options.alias_override;
    for (IndexSet& g : model.alias_groups_) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    check_groups(model.alias_groups_, "alias");
    SortUnique(model.alias_groups_);
  } else {
    model.alias_groups_ =
        DetectAliases(model.ratings_, model.transient_min_,
                      model.transient_max_, model.owner_, options.tolerance);
  }
  return model;
}

bool HouseholdModel::CanTransition(std::size_t j, int from, int to) const {
  const std::size_t codes = appliances_[j].states.size() + 1;
  return transitions_[j][static_cast<std::size_t>(from) * codes +
                         static_cast<std::size_t>(to)] != 0;
}

std::vector<int> HouseholdModel::Successors(std::size_t j, int from) const {
  std::vector<int> out;
  const int codes = static_cast<int>(appliances_[j].states.size()) + 1;
  for (int to = 0; to < codes; ++to) {
    if (CanTransition(j, from, to)) out.push_back(to);
  }
  return out;
}

const std::string& HouseholdModel::label(std::size_t j, int code) const {
  static const std::string kOff = kOffLabel;
  if (code == kOffCode) return kOff;
  return appliances_[j].states[static_cast<std::size_t>(code - 1)].label;
}

std::optional<int> HouseholdModel::code_of(std::size_t j,
                                           const std::string& label) const {
  if (label == kOffLabel) return kOffCode;
  const auto& states = appliances_[j].states;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].label == label) return static_cast<int>(s) + 1;
  }
  return std::nullopt;
}

std::optional<std::size_t> HouseholdModel::index_of(
    const std::string& appliance_id) const {
  for (std::size_t j = 0; j < appliances_.size(); ++j) {
    if (appliances_[j].id == appliance_id) return j;
  }
  return std::nullopt;
}

}  // namespace alip
