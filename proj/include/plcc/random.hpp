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

#ifndef PLCC_RANDOM_HPP_
#define PLCC_RANDOM_HPP_

// Seeded random instances for property tests and the command line.

#include <random>

#include "plcc/model.hpp"

namespace plcc {

struct RandomCaseOptions {
  int min_contestants = 2;
  int max_contestants = 5;
  int min_designers = 1;
  int max_designers = 4;
  int max_contests = 8;
  double low = 1e-2;  // log-uniform range for T, R and α
  double high = 1e2;
  PrizeModel mode = PrizeModel::kDivisible;
  // Reject instances with max T_i > ΣT/2.
  bool require_no_dominant = false;
};

struct RandomCase {
  Instance instance;
  DesignerProfile profile;
};

double log_uniform(std::mt19937_64& rng, double low, double high);

// Budgets are set to each designer's total prize, so profiles are feasible.
RandomCase random_case(std::mt19937_64& rng, const RandomCaseOptions& options);

}  // namespace plcc

#endif  // PLCC_RANDOM_HPP_
