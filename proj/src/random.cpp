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

#include "plcc/random.hpp"

#include <algorithm>
#include <cmath>

namespace plcc {

double log_uniform(std::mt19937_64& rng, double low, double high) {
  std::uniform_real_distribution<double> u(std::log(low), std::log(high));
  return std::exp(u(rng));
}

RandomCase random_case(std::mt19937_64& rng, const RandomCaseOptions& options) {
  std::uniform_int_distribution<int> pick_n(options.min_contestants,
                                            options.max_contestants);
  std::uniform_int_distribution<int> pick_m(options.min_designers,
                                            options.max_designers);
  RandomCase out;
  const int n = pick_n(rng);
  const int m = pick_m(rng);
  out.instance.efforts.resize(n);
  for (int attempt = 0;; ++attempt) {
    for (int i = 0; i < n; ++i) {
      out.instance.efforts[i] = log_uniform(rng, options.low, options.high);
    }
    if (!options.require_no_dominant) break;
    const double half = out.instance.efforts.sum() / 2.0;
    if (out.instance.efforts.maxCoeff() <= half) break;
    if (attempt > 10000) {
      out.instance.efforts.setOnes();
      break;
    }
  }

  int contests = m;
  if (options.mode == PrizeModel::kDivisible && options.max_contests > m) {
    contests = std::uniform_int_distribution<int>(m, options.max_contests)(rng);
  }
  std::uniform_int_distribution<int> pick_i(0, n - 1);
  std::uniform_int_distribution<int> pick_j(0, m - 1);
  Vector spent = Vector::Zero(m);
  for (int k = 0; k < contests; ++k) {
    ContestConfig c;
    c.id = "C" + std::to_string(k + 1);
    c.designer = k < m ? k : pick_j(rng);
    const int a = pick_i(rng);
    int b = pick_i(rng);
    while (b == a) b = pick_i(rng);
    c.participants = {a, b};
    c.reward = log_uniform(rng, options.low, options.high);
    c.biases = {log_uniform(rng, options.low, options.high),
                log_uniform(rng, options.low, options.high)};
    spent[c.designer] += c.reward;
    out.profile.contests.push_back(c);
  }
  out.instance.budgets = spent;
  return out;
}

}  // namespace plcc
