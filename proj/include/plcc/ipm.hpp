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

#ifndef PLCC_IPM_HPP_
#define PLCC_IPM_HPP_

// Indivisible-prize designer stage: balancing biases, biases for target
// winning probabilities, the weighted congestion game over participant pairs
// and the weak designer equilibrium built from it.

#include <array>
#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/model.hpp"
#include "plcc/oracle.hpp"

namespace plcc {

struct FirstStageEntry {
  double reward = 0.0;
  std::array<int, 2> pair{0, 1};
};
// One entry per designer.
using FirstStageStrategy = std::vector<FirstStageEntry>;

struct BalancedOutcome {
  DesignerProfile profile;  // contest "C<j+1>" for designer j
  Vector lambda;
  EffortProfile efforts;
};

BalancedOutcome balancing_biases(const Instance& instance,
                                 const FirstStageStrategy& first_stage);

struct TargetBiases {
  ContestList contests;  // the variable contests with normalized α*
  Vector lambda;
  SolverTrace trace;
};

// targets[k] is the target winning probability of the first participant of
// variable[k].
TargetBiases biases_for_targets(const Instance& instance,
                                const ContestList& fixed,
                                const ContestList& variable,
                                const std::vector<double>& targets,
                                const SolverConfig& config);

struct CongestionState {
  Vector weights;  // w_j = B_j
  Vector values;   // v_i = T_i
  std::vector<std::array<int, 2>> strategies;

  Vector loads() const;
  // V_j = Σ_{i∈s_j} v_i / c_i.
  double agent_value(int j) const;
  // V_j if agent j switched to `pair`, everyone else fixed.
  double deviation_value(int j, const std::array<int, 2>& pair) const;
};

std::array<int, 2> congestion_best_response(const CongestionState& state,
                                            int j);

// Rewards v_i/c_i sorted ascending; unused resources count as +∞.
std::vector<double> lexicographic_potential(const CongestionState& state);

struct PneStep {
  int agent = 0;
  std::array<int, 2> from{};
  std::array<int, 2> to{};
  std::vector<double> potential;  // after the step
};

struct PneResult {
  CongestionState state;
  std::vector<std::vector<double>> initial_potential;  // size 1
  std::vector<PneStep> steps;
  bool potential_increasing = true;
  bool certified = false;  // exhaustive pair-deviation check
  std::vector<std::string> violations;
};

PneResult first_substage_pne(const Instance& instance,
                             long max_steps = 1000000);

struct WdeReport {
  DesignerProfile profile;
  Vector lambda;
  EffortProfile efforts;
  PneResult pne;
  Vector designer_utilities;  // from the reconstructed equilibrium
  Vector formula_utilities;   // Σ_{i∈S_j} T_i B_j / Σ_{j′∋i} B_{j′}
  EmvCheck emv;
  bool balanced = false;  // every p̂ = 1/2
  std::vector<DeviationSearchResult> deviation_checks;
  double max_improvement = 0.0;  // relative, over all checked candidates
  bool certified = false;
};

// bias_factors: the spot-check grid applied to every designer (may be empty).
WdeReport build_wde(const Instance& instance,
                    const std::vector<double>& bias_factors = {},
                    const SolverConfig& config = SolverConfig{1e-12});

}  // namespace plcc

#endif  // PLCC_IPM_HPP_
