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

#ifndef ALIP_SRC_YAML_UTIL_H_
#define ALIP_SRC_YAML_UTIL_H_

#include <string>

#include <yaml-cpp/yaml.h>

#include "alip/error.h"

namespace alip::internal {

[[noreturn]] inline void Fail(const YAML::Node& node, const std::string& field,
                              const std::string& message) {
  std::string where = "line " + std::to_string(node.Mark().line + 1);
  if (node.Mark().line < 0) where = "line ?";
  throw Error(ErrorCode::kParseError,
              where + ", field '" + field + "': " + message);
}

inline YAML::Node LoadYaml(const std::string& text, const std::string& name) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::kParseError,
                name + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

template <typename T>
T Convert(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    Fail(node, field, "has the wrong type");
  }
}

template <typename T>
T Get(const YAML::Node& parent, const std::string& key, const std::string& field) {
  const YAML::Node node = parent[key];
  if (!node) Fail(parent, field + "/" + key, "is required");
  return Convert<T>(node, field + "/" + key);
}

template <typename T>
T Optional(const YAML::Node& parent, const std::string& key,
           const std::string& field, T fallback) {
  const YAML::Node node = parent[key];
  if (!node) return fallback;
  return Convert<T>(node, field + "/" + key);
}

}  // namespace alip::internal

#endif  // ALIP_SRC_YAML_UTIL_H_
