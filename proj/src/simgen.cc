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

#include "alip/simgen.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "alip/error.h"
#include "yaml_util.h"

namespace alip {

namespace {

// Leaves OFF with probability leave_off (spread over legal targets), stays in
// an ON state with probability stay (the rest spread over legal targets).
DenseMatrix Walk(const HouseholdModel& model, std::size_t j, double leave_off,
                 double stay) {
  const int codes = static_cast<int>(model.num_states_of(j)) + 1;
  DenseMatrix p(codes, codes);
  for (int from = 0; from < codes; ++from) {
    if (from == kOffCode && model.appliance(j).always_on) continue;
    std::vector<int> others;
    for (int to : model.Successors(j, from)) {
      if (to != from) others.push_back(to);
    }
    const double keep = from == kOffCode ? 1.0 - leave_off : stay;
    if (others.empty()) {
      p(from, from) = 1.0;
      continue;
    }
    p(from, from) = keep;
    for (int to : others) p(from, to) = (1.0 - keep) / static_cast<double>(others.size());
  }
  return p;
}

struct WalkParams {
  double leave_off;
  double stay;
};

SimScenario Assemble(ModelFile file, const std::vector<WalkParams>& walks,
                     std::size_t transient_len, double noise_sd,
                     std::uint64_t seed, std::size_t length) {
  const HouseholdModel model = CompileModelFile(file);
  SimScenario s;
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    s.transitions.push_back(Walk(model, j, walks[j].leave_off, walks[j].stay));
  }
  s.model = std::move(file);
  s.transient_len = transient_len;
  s.noise_sd = noise_sd;
  s.seed = seed;
  s.length = length;
  return s;
}

ApplianceSpec Steady(std::string id, std::vector<double> ratings) {
  ApplianceSpec a;
  a.id = std::move(id);
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    a.states.push_back(StateSpec::Steady("s" + std::to_string(i + 1), ratings[i]));
  }
  return a;
}

SimScenario CleanPreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 1.0;
  f.specs = {Steady("LMP", {60}), Steady("TV", {130, 410}),
             Steady("KET", {1010, 2300}), Steady("HTR", {5200, 7700})};
  return Assemble(std::move(f), {{0.02, 0.98}, {0.01, 0.99}, {0.01, 0.98}, {0.005, 0.99}},
                  0, 0.0, seed, length);
}

// 300 vs 100 + 201: the single appliance is common, the pair is rare.
SimScenario CollisionPreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 5.0;
  f.specs = {Steady("LMP", {100}), Steady("FAN", {201}), Steady("DHW", {300}),
             Steady("OVN", {2150})};
  return Assemble(std::move(f),
                  {{0.0005, 0.995}, {0.0005, 0.995}, {0.0075, 0.995}, {0.00025, 0.995}},
                  0, 6.0, seed, length);
}

// A pump whose start-up overshoot equals another appliance's rating. The
// aliased appliance is rarely on together with the pump.
SimScenario AliasPreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 5.0;
  ApplianceSpec pump;
  pump.id = "PMP";
  pump.states = {{"s1", 500, 500, 800}};
  f.specs = {Steady("DEH", {300}), pump, Steady("TV", {1250})};
  return Assemble(std::move(f), {{0.0001, 0.995}, {0.005, 0.99}, {0.00025, 0.995}}, 12,
                  4.0, seed, length);
}

// A small appliance buried under noise comparable to its rating.
SimScenario ChatterPreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 1.0;
  f.specs = {Steady("B1E", {150}), Steady("CDE", {2400})};
  return Assemble(std::move(f), {{0.01, 0.99}, {0.00025, 0.995}}, 0, 110.0, seed,
                  length);
}

// Fridge cycling OFF -> s1 -> s2 -> s3 -> OFF, where s1 (compressor) and s3
// (compressor plus fan) are within noise of each other.
SimScenario FridgePreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 5.0;
  ApplianceSpec frg;
  frg.id = "FRG";
  frg.states = {StateSpec::Steady("s1", 120), StateSpec::Steady("s2", 400),
                StateSpec::Steady("s3", 128)};
  frg.std_edges = {{"OFF", "s1"}, {"s1", "OFF"}, {"s1", "s2"},
                   {"s2", "s3"},  {"s3", "OFF"}};
  f.specs = {frg, Steady("MIC", {325}), Steady("DSH", {1180})};
  return Assemble(std::move(f), {{0.005, 0.995}, {0.0005, 0.985}, {0.00025, 0.995}}, 0,
                  5.0, seed, length);
}

// Collision, alias and chatter in one five-appliance house.
SimScenario MixedPreset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 5.0;
  ApplianceSpec pump;
  pump.id = "PMP";
  pump.states = {{"s1", 650, 650, 1050}};
  f.specs = {Steady("LMP", {100}), Steady("FAN", {201}), Steady("DHW", {300}),
             pump, Steady("HTR", {400})};
  return Assemble(std::move(f),
                  {{0.0005, 0.995}, {0.0005, 0.995}, {0.0075, 0.995}, {0.01, 0.98},
                   {0.00015, 0.995}},
                  6, 8.0, seed, length);
}

// Four appliances with 3, 4, 4 and 2 non-OFF states (m = 13).
SimScenario Exp1Preset(std::uint64_t seed, std::size_t length) {
  ModelFile f;
  f.options.tolerance = 5.0;
  ApplianceSpec cde = Steady("CDE", {230, 4700, 5200});
  ApplianceSpec frg = Steady("FRG", {115, 250, 420, 610});
  frg.always_on = false;
  frg.std_edges = {{"OFF", "s1"}, {"s1", "OFF"}, {"s1", "s2"}, {"s2", "s3"},
                   {"s3", "s1"},  {"s2", "s1"},  {"s3", "s4"}, {"s4", "s1"}};
  ApplianceSpec hpe = Steady("HPE", {40, 1450, 1900, 2600});
  hpe.always_on = true;
  ApplianceSpec b1e = Steady("B1E", {60, 180});
  f.specs = {cde, frg, hpe, b1e};
  return Assemble(std::move(f),
                  {{0.002, 0.99}, {0.02, 0.98}, {0.0, 0.99}, {0.01, 0.98}}, 0,
                  10.0, seed, length);
}

DenseMatrix ParseMatrix(const YAML::Node& node, const std::string& field,
                        std::size_t codes) {
  if (!node.IsSequence() || node.size() != codes) {
    internal::Fail(node, field, "expected " + std::to_string(codes) + " rows");
  }
  DenseMatrix p(codes, codes);
  for (std::size_t r = 0; r < codes; ++r) {
    const std::string rf = field + "/" + std::to_string(r);
    if (!node[r].IsSequence() || node[r].size() != codes) {
      internal::Fail(node[r], rf, "expected " + std::to_string(codes) + " entries");
    }
    for (std::size_t c = 0; c < codes; ++c) {
      p(r, c) = internal::Convert<double>(node[r][c], rf + "/" + std::to_string(c));
    }
  }
  return p;
}

}  // namespace

DenseMatrix UniformTransitions(const HouseholdModel& model, std::size_t j,
                               double stay) {
  return Walk(model, j, 1.0 - stay, stay);
}

void ValidateScenario(const SimScenario& scenario) {
  HouseholdModel model = [&] {
    try {
      return CompileModelFile(scenario.model);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidScenario, e.what());
    }
  }();
  const std::size_t n = model.num_appliances();
  if (scenario.transitions.size() != n) {
    throw Error(ErrorCode::kInvalidScenario, "one transition matrix per appliance");
  }
  if (!scenario.initial.empty() && scenario.initial.size() != n) {
    throw Error(ErrorCode::kInvalidScenario, "initial codes do not match appliances");
  }
  if (!(scenario.noise_sd >= 0.0) || !std::isfinite(scenario.noise_sd)) {
    throw Error(ErrorCode::kInvalidScenario, "noise_sd must be finite and >= 0");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::string id = model.appliance(j).id;
    const std::size_t codes = model.num_states_of(j) + 1;
    const DenseMatrix& p = scenario.transitions[j];
    if (p.rows() != codes || p.cols() != codes) {
      throw Error(ErrorCode::kInvalidScenario, id + ": transition matrix shape");
    }
    for (std::size_t r = 0; r < codes; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < codes; ++c) {
        const double v = p(r, c);
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw Error(ErrorCode::kInvalidScenario, id + ": negative probability");
        }
        if (v > 0.0 && !model.CanTransition(j, static_cast<int>(r), static_cast<int>(c))) {
          throw Error(ErrorCode::kInvalidScenario,
                      id + ": probability on non-edge " + model.label(j, static_cast<int>(r)) +
                          "->" + model.label(j, static_cast<int>(c)));
        }
        sum += v;
      }
      const bool unused_off = r == 0 && model.appliance(j).always_on && sum == 0.0;
      if (!unused_off && std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::kInvalidScenario,
                    id + ": row " + model.label(j, static_cast<int>(r)) +
                        " does not sum to 1");
      }
    }
    if (!scenario.initial.empty()) {
      const int c = scenario.initial[j];
      if (c < 0 || c >= static_cast<int>(codes) ||
          (c == kOffCode && model.appliance(j).always_on)) {
        throw Error(ErrorCode::kInvalidScenario, id + ": bad initial state");
      }
    }
  }
}

SimResult Simulate(const SimScenario& scenario) {
  ValidateScenario(scenario);
  const HouseholdModel model = CompileModelFile(scenario.model);
  const std::size_t n = model.num_appliances();
  const std::size_t T = scenario.length;

  std::mt19937_64 rng(scenario.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, scenario.noise_sd > 0 ? scenario.noise_sd : 1.0);

  SimResult out;
  ReadingSeries& series = out.series;
  for (const ApplianceSpec& a : model.appliances()) series.channel_names.push_back(a.id);
  series.channels = DenseMatrix(T, n);
  series.timestamps.resize(T);
  series.aggregate.resize(T);
  out.states.assign(T, std::vector<int>(n, kOffCode));

  std::vector<int> code(n);
  for (std::size_t j = 0; j < n; ++j) {
    code[j] = scenario.initial.empty()
                  ? (model.appliance(j).always_on ? 1 : kOffCode)
                  : scenario.initial[j];
  }
  std::vector<std::size_t> since(n, scenario.transient_len);  // samples in state
  std::vector<double> start_value(n, 0.0);

  for (std::size_t k = 0; k < T; ++k) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (k > 0) {
        const DenseMatrix& p = scenario.transitions[j];
        const double u = uniform(rng);
        const int codes = static_cast<int>(p.cols());
        double acc = 0.0;
        int next = code[j];
        for (int c = 0; c < codes; ++c) {
          acc += p(static_cast<std::size_t>(code[j]), static_cast<std::size_t>(c));
          if (u < acc) {
            next = c;
            break;
          }
        }
        if (next != code[j]) {
          code[j] = next;
          since[j] = 0;
          if (next != kOffCode) {
            const std::size_t i = model.flat_index(j, next);
            const double lo = model.transient_min()[i];
            const double hi = model.transient_max()[i];
            start_value[j] = lo + (hi - lo) * uniform(rng);
          }
        }
      }
      double draw = 0.0;
      if (code[j] != kOffCode) {
        const std::size_t i = model.flat_index(j, code[j]);
        draw = model.ratings()[i];
        if (since[j] < scenario.transient_len && model.transient_min()[i] < model.transient_max()[i]) {
          const double frac = 1.0 - static_cast<double>(since[j]) /
                                        static_cast<double>(scenario.transient_len);
          draw += (start_value[j] - draw) * frac;
        }
      }
      ++since[j];
      out.states[k][j] = code[j];
      series.channels(k, j) = draw;
      total += draw;
    }
    if (scenario.noise_sd > 0.0) total += noise(rng);
    series.timestamps[k] = static_cast<double>(k);
    series.aggregate[k] = std::max(0.0, total);
  }
  return out;
}

std::vector<std::string> PresetNames() {
  return {"clean", "collision", "alias", "chatter", "fridge", "mixed", "exp1"};
}

SimScenario Preset(const std::string& name, std::uint64_t seed, std::size_t length) {
  if (name == "clean") return CleanPreset(seed, length);
  if (name == "collision") return CollisionPreset(seed, length);
  if (name == "alias") return AliasPreset(seed, length);
  if (name == "chatter") return ChatterPreset(seed, length);
  if (name == "fridge") return FridgePreset(seed, length);
  if (name == "mixed") return MixedPreset(seed, length);
  if (name == "exp1") return Exp1Preset(seed, length);
  throw Error(ErrorCode::kInvalidScenario, "unknown preset '" + name + "'");
}

std::vector<SimScenario> CollisionSuite(std::size_t count, std::size_t length,
                                        std::uint64_t base_seed) {
  static const char* kCycle[] = {"collision", "alias", "chatter", "fridge", "mixed"};
  std::vector<SimScenario> suite;
  for (std::size_t i = 0; i < count; ++i) {
    suite.push_back(Preset(kCycle[i % std::size(kCycle)], base_seed + i, length));
  }
  return suite;
}

SimScenario ParseScenario(const std::string& text, const std::string& base_dir) {
  using internal::Fail;
  using internal::Optional;
  const YAML::Node root = internal::LoadYaml(text, "scenario");
  if (!root.IsMap()) Fail(root, "", "expected a mapping at top level");
  const std::string schema =
      Optional<std::string>(root, "schema", "", kScenarioSchema);
  if (schema != kScenarioSchema) {
    Fail(root["schema"], "/schema", "unsupported schema '" + schema + "'");
  }
  const std::size_t length = Optional<std::size_t>(root, "length", "", 10000);
  const std::uint64_t seed = Optional<std::uint64_t>(root, "seed", "", 1);

  if (const YAML::Node preset = root["preset"]) {
    const std::string name = internal::Convert<std::string>(preset, "/preset");
    try {
      return Preset(name, seed, length);
    } catch (const Error&) {
      Fail(preset, "/preset", "unknown preset '" + name + "'");
    }
  }

  SimScenario s;
  const YAML::Node model = root["model"];
  if (!model) Fail(root, "/model", "is required without a preset");
  if (model.IsScalar()) {
    std::filesystem::path p = internal::Convert<std::string>(model, "/model");
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    s.model = LoadModelFile(p.string());
  } else {
    s.model = ParseModelNode(model, "/model");
  }
  const HouseholdModel compiled = CompileModelFile(s.model);
  s.length = length;
  s.seed = seed;
  s.noise_sd = Optional<double>(root, "noise_sd", "", 0.0);
  s.transient_len = Optional<std::size_t>(root, "transient_len", "", 0);

  WalkParams fallback{0.02, 0.98};
  if (const YAML::Node w = root["default_walk"]) {
    fallback.leave_off = Optional<double>(w, "leave_off", "/default_walk", 0.02);
    fallback.stay = Optional<double>(w, "stay", "/default_walk", 0.98);
  }
  const YAML::Node walks = root["walk"];
  const YAML::Node matrices = root["transitions"];
  for (std::size_t j = 0; j < compiled.num_appliances(); ++j) {
    const std::string& id = compiled.appliance(j).id;
    if (matrices && matrices[id]) {
      s.transitions.push_back(ParseMatrix(matrices[id], "/transitions/" + id,
                                          compiled.num_states_of(j) + 1));
      continue;
    }
    WalkParams params = fallback;
    if (walks && walks[id]) {
      const std::string f = "/walk/" + id;
      params.leave_off = Optional<double>(walks[id], "leave_off", f, fallback.leave_off);
      params.stay = Optional<double>(walks[id], "stay", f, fallback.stay);
    }
    s.transitions.push_back(Walk(compiled, j, params.leave_off, params.stay));
  }
  ValidateScenario(s);
  return s;
}

SimScenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str(),
                       std::filesystem::path(path).parent_path().string());
}

}  // namespace alip
