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

#ifndef PLCC_COMMANDS_HPP_
#define PLCC_COMMANDS_HPP_

// Command implementations behind the plcc executable.

#include <iosfwd>
#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/io.hpp"

namespace plcc::cli {

enum ExitCode : int {
  kVerified = 0,
  kUsage = 1,
  kValidation = 2,
  kNonConvergence = 3,
  kMismatch = 4,
};

struct CommandResult {
  int exit_code = kVerified;
  ReportFile report;
  std::string message;
};

// "adaptive", "guaranteed" or "fixed:<γ>"; throws std::invalid_argument.
void parse_step_mode(const std::string& text, SolverConfig* config);

// Solve, reconstruct at (1 + ε′)λ and verify the ε-equilibrium.
CommandResult cmd_solve(const InstanceFile& file, const SolverConfig& config);

// construct is "wde" or "dpm-spe"; the constructed profile is written to
// *profile when non-null.
CommandResult cmd_build(const InstanceFile& file, const std::string& construct,
                        const std::vector<double>& bias_grid,
                        InstanceFile* profile);

// Re-certifies the multipliers and efforts stored in a report.
CommandResult cmd_verify(const InstanceFile& file, const ReportFile& report,
                         double epsilon);

// Entry point used by main(); all output goes to the given streams.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace plcc::cli

#endif  // PLCC_COMMANDS_HPP_
