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

// Seeded synthetic households with known ground truth.
//
// Each appliance performs a Markov walk over its state codes using a
// row-stochastic matrix that is zero off the STD edges. After entering a
// transient-capable state the appliance draws a value in [tmin, tmax] that
// moves linearly to the steady rating over `transient_len` samples. The
// aggregate is the sum of draws plus Gaussian noise, clipped at zero.

#ifndef ALIP_SIMGEN_H_
#define ALIP_SIMGEN_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "alip/dense_matrix.h"
#include "alip/io.h"
#include "alip/model.h"
#include "alip/model_file.h"

namespace alip {

inline constexpr const char* kScenarioSchema = "alip.scenario/1";

struct SimScenario {
  ModelFile model;
  // Per appliance, an (l+1) x (l+1) matrix over state codes.
  std::vector<DenseMatrix> transitions;
  // Per appliance starting code; empty means OFF (first state if always on).
  std::vector<int> initial;
  std::size_t transient_len = 0;
  double noise_sd = 0.0;
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

struct SimResult {
  ReadingSeries series;  // channels are the appliance ids
  std::vector<std::vector<int>> states;  // T x n true codes
};

// Stays with probability `stay`; the rest is spread evenly over the other
// legal successors.
DenseMatrix UniformTransitions(const HouseholdModel& model, std::size_t j,
                               double stay);

// Throws kInvalidScenario.
void ValidateScenario(const SimScenario& scenario);
SimResult Simulate(const SimScenario& scenario);

// Bundled presets. Names: "clean", "collision", "alias", "chatter",
// "fridge", "mixed", "exp1".
std::vector<std::string> PresetNames();
SimScenario Preset(const std::string& name, std::uint64_t seed, std::size_t length);

// The seeded collision-rich benchmark: `count` scenarios cycling through the
// collision, alias, chatter, fridge and mixed presets.
std::vector<SimScenario> CollisionSuite(std::size_t count, std::size_t length,
                                        std::uint64_t base_seed);

// YAML scenario files; see docs/formats.md. Relative model paths resolve
// against `base_dir`.
SimScenario ParseScenario(const std::string& text, const std::string& base_dir);
SimScenario LoadScenario(const std::string& path);

}  // namespace alip

#endif  // ALIP_SIMGEN_H_
