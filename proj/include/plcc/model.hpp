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

#ifndef PLCC_MODEL_HPP_
#define PLCC_MODEL_HPP_

// Core domain types for pairwise lottery contests: instances, contest
// configurations, designer profiles and effort profiles.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace plcc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class PrizeModel { kIndivisible, kDivisible };

// A negative effort, a nonpositive multiplier where one is required, and
// similar out-of-domain arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Missing effort keys, unknown ids, malformed incidence.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Both multipliers of some contest are zero.
class InvalidMultiplierError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A construction precondition does not hold (e.g. a dominant contestant).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Instance {
  Vector efforts;  // T_i, one per contestant.
  Vector budgets;  // B_j, one per designer.

  int num_contestants() const { return static_cast<int>(efforts.size()); }
  int num_designers() const { return static_cast<int>(budgets.size()); }
};

struct ContestConfig {
  std::string id;
  int designer = 0;
  std::array<int, 2> participants{0, 1};
  double reward = 1.0;
  std::array<double, 2> biases{1.0, 1.0};

  bool involves(int i) const {
    return participants[0] == i || participants[1] == i;
  }
  // 0 or 1 for a participant; throws StructuralError otherwise.
  int slot_of(int i) const;
  int opponent_of(int i) const { return participants[1 - slot_of(i)]; }
  double bias_of(int i) const { return biases[slot_of(i)]; }
  double opponent_bias_of(int i) const { return biases[1 - slot_of(i)]; }
  bool operator==(const ContestConfig&) const = default;
};

using ContestList = std::vector<ContestConfig>;

struct DesignerProfile {
  ContestList contests;

  // Indices into `contests` of the contests owned by designer j.
  std::vector<int> contests_of(int j) const;
  const ContestConfig* find(const std::string& id) const;
  bool operator==(const DesignerProfile&) const = default;
};

// For each contestant, the indices of the contests she is invited to.
std::vector<std::vector<int>> incidence(int num_contestants,
                                        const ContestList& contests);

struct EffortKey {
  int contestant = 0;
  std::string contest;
  auto operator<=>(const EffortKey&) const = default;
};

class EffortProfile {
 public:
  void set(int i, const std::string& contest, double x);
  // Throws StructuralError if the key is absent.
  double at(int i, const std::string& contest) const;
  std::optional<double> get(int i, const std::string& contest) const;
  // Compensated sum of contestant i's efforts.
  double total(int i) const;
  const std::map<EffortKey, double>& entries() const { return entries_; }
  bool operator==(const EffortProfile&) const = default;

 private:
  std::map<EffortKey, double> entries_;
};

using ProbabilityMap = std::map<EffortKey, double>;

struct Utilities {
  Vector contestants;
  Vector designers;
};

// Lottery contest success function with f(0,0) = 1/2.
double csf_f(double x, double y);

ProbabilityMap winning_probabilities(const DesignerProfile& profile,
                                     const EffortProfile& x);

Utilities utilities(const Instance& instance, const DesignerProfile& profile,
                    const EffortProfile& x);

std::vector<std::string> validate_instance(const Instance& instance);

// Structural checks on a contest list alone (no budgets or designers).
std::vector<std::string> validate_contests(int num_contestants,
                                           const ContestList& contests);

std::vector<std::string> validate_profile(const Instance& instance,
                                          const DesignerProfile& profile,
                                          PrizeModel mode);

}  // namespace plcc

#endif  // PLCC_MODEL_HPP_
