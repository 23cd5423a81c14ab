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

#include "alip/model_file.h"

#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "alip/error.h"
#include "yaml_util.h"

namespace alip {

namespace {

using internal::Fail;
using internal::Get;
using internal::Optional;

StateSpec ParseState(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) Fail(node, field, "expected a mapping");
  StateSpec s;
  s.label = Get<std::string>(node, "label", field);
  s.rating = Get<double>(node, "rating", field);
  s.transient_min = Optional<double>(node, "tmin", field, s.rating);
  s.transient_max = Optional<double>(node, "tmax", field, s.rating);
  return s;
}

ApplianceSpec ParseAppliance(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) Fail(node, field, "expected a mapping");
  ApplianceSpec a;
  a.id = Get<std::string>(node, "id", field);
  a.always_on = Optional<bool>(node, "always_on", field, false);
  const YAML::Node states = node["states"];
  if (!states || !states.IsSequence() || states.size() == 0) {
    Fail(states ? states : node, field + "/states", "expected a non-empty list");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    a.states.push_back(ParseState(states[i], field + "/states/" + std::to_string(i)));
  }
  if (const YAML::Node edges = node["std"]) {
    if (!edges.IsSequence()) Fail(edges, field + "/std", "expected a list of pairs");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string f = field + "/std/" + std::to_string(i);
      if (!edges[i].IsSequence() || edges[i].size() != 2) {
        Fail(edges[i], f, "expected [from, to]");
      }
      a.std_edges.emplace_back(internal::Convert<std::string>(edges[i][0], f),
                               internal::Convert<std::string>(edges[i][1], f));
    }
  }
  return a;
}

std::vector<IndexSet> ParseGroups(const YAML::Node& node, const std::string& field,
                                  const std::vector<ApplianceSpec>& specs) {
  std::map<std::pair<std::string, std::string>, std::size_t> flat;
  std::size_t offset = 0;
  for (const ApplianceSpec& a : specs) {
    for (std::size_t s = 0; s < a.states.size(); ++s) {
      flat[{a.id, a.states[s].label}] = offset + s;
    }
    offset += a.states.size();
  }
  if (!node.IsSequence()) Fail(node, field, "expected a list of groups");
  std::vector<IndexSet> groups;
  for (std::size_t g = 0; g < node.size(); ++g) {
    const std::string gf = field + "/" + std::to_string(g);
    if (!node[g].IsSequence() || node[g].size() < 2) {
      Fail(node[g], gf, "expected at least two [appliance, state] members");
    }
    IndexSet group;
    for (std::size_t i = 0; i < node[g].size(); ++i) {
      const YAML::Node member = node[g][i];
      const std::string mf = gf + "/" + std::to_string(i);
      if (!member.IsSequence() || member.size() != 2) {
        Fail(member, mf, "expected [appliance, state]");
      }
      const auto key =
          std::make_pair(internal::Convert<std::string>(member[0], mf),
                         internal::Convert<std::string>(member[1], mf));
      const auto it = flat.find(key);
      if (it == flat.end()) {
        Fail(member, mf, "unknown state " + key.first + "." + key.second);
      }
      group.push_back(it->second);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace

ModelFile ParseModelNode(const YAML::Node& root, const std::string& where) {
  if (!root.IsMap()) Fail(root, where, "expected a mapping at top level");
  ModelFile file;
  const std::string schema = Optional<std::string>(root, "schema", where, kModelSchema);
  if (schema != kModelSchema) {
    Fail(root["schema"], where + "/schema", "unsupported schema '" + schema + "'");
  }
  file.unit = Optional<std::string>(root, "unit", where, "VA");
  file.options.tolerance = Optional<double>(root, "tolerance", where, 1.0);
  file.options.max_subset = Optional<int>(root, "max_subset", where, 3);
  const YAML::Node appliances = root["appliances"];
  if (!appliances || !appliances.IsSequence() || appliances.size() == 0) {
    Fail(appliances ? appliances : root, where + "/appliances",
         "expected a non-empty list");
  }
  for (std::size_t i = 0; i < appliances.size(); ++i) {
    file.specs.push_back(
        ParseAppliance(appliances[i], where + "/appliances/" + std::to_string(i)));
  }
  if (const YAML::Node g = root["combo_groups"]) {
    file.options.combo_override = ParseGroups(g, where + "/combo_groups", file.specs);
  }
  if (const YAML::Node g = root["alias_groups"]) {
    file.options.alias_override = ParseGroups(g, where + "/alias_groups", file.specs);
  }
  return file;
}

ModelFile ParseModelFile(const std::string& text) {
  return ParseModelNode(internal::LoadYaml(text, "model"), "");
}

ModelFile LoadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModelNode(internal::LoadYaml(buffer.str(), path), path + ":");
}

HouseholdModel CompileModelFile(const ModelFile& file) {
  return Compile(file.specs, file.options);
}

std::string ModelFileToYaml(const ModelFile& file) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema" << YAML::Value << kModelSchema;
  out << YAML::Key << "unit" << YAML::Value << file.unit;
  out << YAML::Key << "tolerance" << YAML::Value << file.options.tolerance;
  out << YAML::Key << "max_subset" << YAML::Value << file.options.max_subset;
  out << YAML::Key << "appliances" << YAML::Value << YAML::BeginSeq;
  for (const ApplianceSpec& a : file.specs) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << a.id;
    if (a.always_on) out << YAML::Key << "always_on" << YAML::Value << true;
    out << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
    for (const StateSpec& s : a.states) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "label" << YAML::Value << s.label;
      out << YAML::Key << "rating" << YAML::Value << s.rating;
      if (s.is_transient()) {
        out << YAML::Key << "tmin" << YAML::Value << s.transient_min;
        out << YAML::Key << "tmax" << YAML::Value << s.transient_max;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (!a.std_edges.empty()) {
      out << YAML::Key << "std" << YAML::Value << YAML::BeginSeq;
      for (const auto& [from, to] : a.std_edges) {
        out << YAML::Flow << YAML::BeginSeq << from << to << YAML::EndSeq;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace alip
