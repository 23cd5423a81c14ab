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

#include "alip/formulation.h"

#include <cmath>
#include <sstream>

#include "alip/error.h"

namespace alip {

namespace {

void AddGroupRow(MilpInstance& inst, const IndexSet& group, RowKind kind) {
  std::span<double> row = inst.A.AppendRow();
  for (std::size_t i : group) row[i + 1] = 1.0;
  inst.e.push_back(1.0);
  inst.row_kind.push_back(kind);
}

int CountActive(std::span<const std::uint8_t> b, const IndexSet& group) {
  int count = 0;
  for (std::size_t i : group) count += b[i] != 0;
  return count;
}

}  // namespace

MilpInstance BuildInstance(const HouseholdModel& model, double z,
                           const Enhancements& enhancements) {
  const std::size_t m = model.num_states();
  MilpInstance inst;
  inst.z = z;
  inst.f.assign(m + 1, 0.0);
  inst.f[0] = 1.0;
  inst.integrality.assign(m + 1, 1);
  inst.integrality[0] = 0;
  inst.A = DenseMatrix(m + 1);
  inst.A_eq = DenseMatrix(m + 1);

  // v = r since F^t h is all ones; rows are -(v' + u1)^t and (v' - u1)^t.
  inst.A.AppendRow();
  inst.A.AppendRow();
  inst.A(0, 0) = -1.0;
  inst.A(1, 0) = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    inst.A(0, i + 1) = -model.ratings()[i];
    inst.A(1, i + 1) = model.ratings()[i];
  }
  inst.e = {-z, z};
  inst.row_kind = {RowKind::kResidualLower, RowKind::kResidualUpper};

  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    const std::size_t l = model.num_states_of(j);
    if (l < 2) continue;
    IndexSet group;
    for (std::size_t s = 0; s < l; ++s) group.push_back(model.offsets()[j] + s);
    AddGroupRow(inst, group, RowKind::kOneHot);
  }

  if (enhancements.constraints) {
    for (const IndexSet& g : model.combo_groups()) {
      AddGroupRow(inst, g, RowKind::kCombo);
    }
    for (const IndexSet& g : model.alias_groups()) {
      AddGroupRow(inst, g, RowKind::kAlias);
    }
    for (const IndexSet& g : model.always_on_rows()) {
      std::span<double> row = inst.A_eq.AppendRow();
      for (std::size_t i : g) row[i + 1] = 1.0;
      inst.e_eq.push_back(1.0);
    }
  }
  return inst;
}

Evaluation Evaluate(const HouseholdModel& model,
                    std::span<const std::uint8_t> b, double z,
                    const Enhancements& enhancements) {
  const std::size_t m = model.num_states();
  if (b.size() != m) {
    throw Error(ErrorCode::kLengthMismatch,
                "indicator length " + std::to_string(b.size()) +
                    " != model states " + std::to_string(m));
  }
  double draw = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i]) draw += model.ratings()[i];
  }
  Evaluation ev;
  ev.delta = std::abs(z - draw);
  ev.feasible = true;
  for (std::size_t j = 0; j < model.num_appliances() && ev.feasible; ++j) {
    int active = 0;
    for (std::size_t s = 0; s < model.num_states_of(j); ++s) {
      active += b[model.offsets()[j] + s] != 0;
    }
    if (active > 1) ev.feasible = false;
  }
  if (enhancements.constraints && ev.feasible) {
    for (const IndexSet& g : model.combo_groups()) {
      if (CountActive(b, g) > 1) ev.feasible = false;
    }
    for (const IndexSet& g : model.alias_groups()) {
      if (CountActive(b, g) > 1) ev.feasible = false;
    }
    for (const IndexSet& g : model.always_on_rows()) {
      if (CountActive(b, g) != 1) ev.feasible = false;
    }
  }
  return ev;
}

std::vector<int> StateCodes(const HouseholdModel& model,
                            std::span<const std::uint8_t> b) {
  std::vector<int> codes(model.num_appliances(), kOffCode);
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    for (std::size_t s = 0; s < model.num_states_of(j); ++s) {
      if (b[model.offsets()[j] + s]) {
        codes[j] = static_cast<int>(s) + 1;
        break;
      }
    }
  }
  return codes;
}

StateAssignment MakeAssignment(const HouseholdModel& model,
                               std::span<const int> codes, double z) {
  StateAssignment a;
  a.z = z;
  a.b.assign(model.num_states(), 0);
  a.s.assign(model.num_appliances(), 0.0);
  for (std::size_t j = 0; j < model.num_appliances(); ++j) {
    if (codes[j] == kOffCode) continue;
    a.b[model.flat_index(j, codes[j])] = 1;
    a.s[j] = model.rating(j, codes[j]);
  }
  double draw = 0.0;
  for (std::size_t i = 0; i < a.b.size(); ++i) {
    if (a.b[i]) draw += model.ratings()[i];
  }
  a.delta = std::abs(z - draw);
  return a;
}

std::string DebugString(const MilpInstance& inst) {
  std::ostringstream out;
  const auto dump_row = [&out](std::span<const double> row) {
    for (double v : row) out << ' ' << v;
  };
  out << "z = " << inst.z << "\nf =";
  dump_row(inst.f);
  out << "\nA | e\n";
  for (std::size_t r = 0; r < inst.A.rows(); ++r) {
    dump_row(inst.A.row(r));
    out << " | " << inst.e[r] << '\n';
  }
  out << "A_eq | e_eq\n";
  for (std::size_t r = 0; r < inst.A_eq.rows(); ++r) {
    dump_row(inst.A_eq.row(r));
    out << " | " << inst.e_eq[r] << '\n';
  }
  return out.str();
}

}  // namespace alip
