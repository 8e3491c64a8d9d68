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

#ifndef PLCC_IO_HPP_
#define PLCC_IO_HPP_

// Instance and report files (JSON) and plot-data CSV emission.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/model.hpp"

namespace plcc {

// Malformed document: bad syntax, missing keys, wrong value types.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed document describing an invalid instance or profile.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  std::vector<std::string> contestant_ids;
  std::vector<std::string> designer_ids;
  Instance instance;
  DesignerProfile profile;
  PrizeModel mode = PrizeModel::kDivisible;

  bool operator==(const InstanceFile& o) const;
};

// Ids "1".."n" and "1".."m".
InstanceFile make_instance_file(const Instance& instance,
                                const DesignerProfile& profile,
                                PrizeModel mode);

InstanceFile parse_instance(const std::string& text);
std::string emit_instance(const InstanceFile& file);

struct ReportEffort {
  std::string contestant;
  std::string contest;
  double effort = 0.0;
  double probability = 0.0;
  bool operator==(const ReportEffort&) const = default;
};

struct ReportSolver {
  double epsilon = 0.0;
  std::string step_mode;
  long iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
  bool operator==(const ReportSolver&) const = default;
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  bool operator==(const ReportCheck&) const = default;
};

struct ReportValue {
  std::string name;
  double value = 0.0;
  bool operator==(const ReportValue&) const = default;
};

struct ReportFile {
  std::string kind;
  std::vector<std::string> contestants;
  std::vector<std::string> designers;
  std::vector<double> lambda;
  std::vector<ReportEffort> efforts;
  std::vector<double> contestant_utilities;
  std::vector<double> designer_utilities;
  std::optional<ReportSolver> solver;
  std::vector<ReportCheck> checks;
  std::vector<ReportValue> values;
  bool operator==(const ReportFile&) const = default;

  bool all_checks_pass() const;
};

// Report of an equilibrium: λ, efforts, probabilities and utilities, plus
// the solver summary when a trace is given.
ReportFile equilibrium_report(const std::string& kind, const InstanceFile& file,
                              const Vector& lambda, const EffortProfile& x,
                              const SolverTrace* trace = nullptr,
                              double epsilon = 0.0);

ReportFile parse_report(const std::string& text);
std::string emit_report(const ReportFile& report);

// Header "iteration,max_relative_residual"; one row per history entry.
std::string residual_csv(const ReportFile& report);
// Header "contestant,contest,effort,probability".
std::string effort_csv(const ReportFile& report);
// Header "role,id,utility".
std::string utility_csv(const ReportFile& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace plcc

#endif  // PLCC_IO_HPP_
