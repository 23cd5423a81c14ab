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

// YAML household model files (schema alip.model/1). See docs/formats.md.

#ifndef ALIP_MODEL_FILE_H_
#define ALIP_MODEL_FILE_H_

#include <string>
#include <vector>

#include "alip/model.h"

namespace YAML {
class Node;
}  // namespace YAML

namespace alip {

inline constexpr const char* kModelSchema = "alip.model/1";

struct ModelFile {
  std::vector<ApplianceSpec> specs;
  CompileOptions options;
  std::string unit = "VA";
};

// Throws Error(kParseError) citing the line and field at fault.
ModelFile ParseModelFile(const std::string& text);
ModelFile LoadModelFile(const std::string& path);

// Parses an already-loaded mapping; `where` prefixes error messages.
ModelFile ParseModelNode(const YAML::Node& root, const std::string& where);

HouseholdModel CompileModelFile(const ModelFile& file);

std::string ModelFileToYaml(const ModelFile& file);

}  // namespace alip

#endif  // ALIP_MODEL_FILE_H_
