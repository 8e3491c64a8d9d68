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

#ifndef PLCC_FIXTURES_HPP_
#define PLCC_FIXTURES_HPP_

// Embedded reproduction cases with published golden values.

#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/io.hpp"

namespace plcc {

enum class GoldenKind { kRelative, kAbsolute, kAtLeast, kPositive };

struct GoldenCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  GoldenKind kind = GoldenKind::kRelative;
  bool passed() const;
};

struct ReproResult {
  std::string name;
  std::vector<GoldenCheck> checks;
  ReportFile report;  // the deviation equilibrium with golden values attached
  bool passed() const;
};

// Four contestants, four single-contest designers; α_{C1} = (alpha, 1).
InstanceFile asymmetric_bias_instance(double alpha_c1_first = 1000.0);
// Four contestants, two designers with two contests each; α_{C1} =
// (alpha, 1).
InstanceFile divisible_bias_instance(double alpha_c1_first = 1.0);
// Three unit contestants and two unit designers, both contests on {1,2}.
InstanceFile three_player_symmetric_instance();
// Same, with designer 2 inviting {1,3}.
InstanceFile three_player_split_instance();
// Contests on {1,2} and {1,3} with bias ratio 2 toward contestant 1.
InstanceFile three_player_biased_instance();
// Designer 2 moved to {2,3} with α = (1, 7 − 2√10).
InstanceFile three_player_bias_deviation_instance();

// Precision used by reproduction solves.
SolverConfig repro_config();

ReproResult repro_three_player(const SolverConfig& config = repro_config());
ReproResult repro_asymmetric_bias(const SolverConfig& config = repro_config());
ReproResult repro_divisible_bias(const SolverConfig& config = repro_config());
// name is one of "thm4.1", "thm4.4", "thm5.1".
ReproResult run_repro(const std::string& name,
                      const SolverConfig& config = repro_config());

std::string diff_table(const ReproResult& result);

}  // namespace plcc

#endif  // PLCC_FIXTURES_HPP_
