// Copyright 2026 The plcc Authors.
//
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

#ifndef PLCC_DPM_HPP_
#define PLCC_DPM_HPP_

// Divisible-prize designer stage: the folded interval matching and the
// proportional-allocation designer equilibrium built from it.

#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/model.hpp"

namespace plcc {

struct MatchingEntry {
  int i = 0;  // i < k
  int k = 0;
  double amount = 0.0;
  bool operator==(const MatchingEntry&) const = default;
};

struct EffortMatching {
  std::vector<MatchingEntry> entries;
  double total_half = 0.0;  // M
};

// Throws PreconditionError naming the offender if some T_i > ΣT/2.
EffortMatching effort_matching(const Vector& efforts);

struct ProportionalCheck {
  bool pass = false;
  std::vector<std::string> violations;
  Vector lambda;  // the solved multipliers used for the probability check
};

ProportionalCheck verify_proportional_conditions(
    const Instance& instance, const DesignerProfile& profile, double tol,
    const SolverConfig& config = SolverConfig{1e-12});

// u_i = T_i/ΣT·ΣB and u_j = B_j/ΣB·ΣT.
Utilities equilibrium_utilities(const Instance& instance);

struct DpmReport {
  DesignerProfile profile;
  Vector lambda;
  EffortProfile efforts;
  EffortMatching matching;
  ProportionalCheck conditions;
  EmvCheck emv;
  Utilities achieved;
  Utilities closed_form;
  Vector budget_spent;
  bool certified = false;
  std::vector<std::string> violations;
};

DpmReport build_dpm_spe(const Instance& instance);

}  // namespace plcc

#endif  // PLCC_DPM_HPP_
