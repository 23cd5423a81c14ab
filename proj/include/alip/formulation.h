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

// Per-timestep mixed-integer linear program.
//
// Variables are x = [delta; b] where delta >= 0 is continuous and b is the
// binary indicator vector over the m non-OFF states. The program is
//
//   minimize   delta
//   subject to -delta - r.b <= -z
//              -delta + r.b <=  z
//              sum of b over each multi-state appliance <= 1
//              sum of b over each combo / alias group   <= 1   (augmented)
//              sum of b over each always-on appliance   == 1   (augmented)
//
// The first two rows are the linearization of |z - r.b|.

#ifndef ALIP_FORMULATION_H_
#define ALIP_FORMULATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alip/dense_matrix.h"
#include "alip/model.h"

namespace alip {

struct Enhancements {
  bool constraints = true;     // always-on, combo and alias rows
  bool std_correction = true;  // state transition diagram veto
  bool median = true;          // lagged median correction
  bool lp_refine = true;       // transient power refinement

  static Enhancements None() { return {false, false, false, false}; }
  static Enhancements All() { return {}; }
  bool any() const { return constraints || std_correction || median || lp_refine; }
  bool operator==(const Enhancements&) const = default;
};

enum class RowKind : std::uint8_t {
  kResidualLower,  // -delta - r.b <= -z
  kResidualUpper,  // -delta + r.b <= z
  kOneHot,
  kCombo,
  kAlias,
};

struct MilpInstance {
  double z = 0.0;
  std::vector<double> f;  // [1; 0...]
  DenseMatrix A;
  std::vector<double> e;
  std::vector<RowKind> row_kind;
  DenseMatrix A_eq;
  std::vector<double> e_eq;
  std::vector<char> integrality;  // 0 for delta, 1 for each b entry

  std::size_t num_vars() const { return f.size(); }
};

struct StateAssignment {
  std::vector<std::uint8_t> b;
  double delta = 0.0;
  std::vector<double> s;  // per-appliance steady draw
  double z = 0.0;

  bool operator==(const StateAssignment&) const = default;
};

struct Evaluation {
  double delta = 0.0;
  bool feasible = false;
};

MilpInstance BuildInstance(const HouseholdModel& model, double z,
                           const Enhancements& enhancements);

// Residual and feasibility of b. Augmentation rows are checked only when
// enhancements.constraints is set. Throws kLengthMismatch.
Evaluation Evaluate(const HouseholdModel& model,
                    std::span<const std::uint8_t> b, double z,
                    const Enhancements& enhancements = Enhancements::All());

// Per-appliance state codes (0 = OFF) of an indicator vector.
std::vector<int> StateCodes(const HouseholdModel& model,
                            std::span<const std::uint8_t> b);

// Assignment for explicit per-appliance codes, with delta and s filled in.
StateAssignment MakeAssignment(const HouseholdModel& model,
                               std::span<const int> codes, double z);

// Human-readable dump of f, A, e, A_eq, e_eq.
std::string DebugString(const MilpInstance& instance);

}  // namespace alip

#endif  // ALIP_FORMULATION_H_
