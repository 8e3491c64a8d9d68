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

#include "plcc/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plcc/formulas.hpp"
#include "plcc/summation.hpp"

namespace plcc {
namespace {

std::string contest_id(int j) { return "C" + std::to_string(j + 1); }

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

bool lex_greater(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

double tolerance_for(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

// r_i^j = v_i / (w_j + c_i(s_{-j})).
Vector agent_rewards(const CongestionState& state, int j) {
  Vector loads = state.loads();
  for (int i : state.strategies[j]) loads[i] -= state.weights[j];
  Vector r(state.values.size());
  for (int i = 0; i < r.size(); ++i) {
    r[i] = state.values[i] / (state.weights[j] + std::max(loads[i], 0.0));
  }
  return r;
}

}  // namespace

BalancedOutcome balancing_biases(const Instance& instance,
                                 const FirstStageStrategy& first_stage) {
  const int n = instance.num_contestants();
  if (static_cast<int>(first_stage.size()) != instance.num_designers()) {
    throw StructuralError("first-stage strategy needs one entry per designer");
  }
  BalancedOutcome out;
  for (int j = 0; j < static_cast<int>(first_stage.size()); ++j) {
    const FirstStageEntry& e = first_stage[j];
    ContestConfig c;
    c.id = contest_id(j);
    c.designer = j;
    c.participants = e.pair;
    c.reward = e.reward;
    out.profile.contests.push_back(c);
  }
  const auto problems = validate_contests(n, out.profile.contests);
  if (!problems.empty()) throw StructuralError(problems.front());

  const auto inc = incidence(n, out.profile.contests);
  std::vector<double> prize_total(n, 0.0);
  out.lambda = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    CompensatedSum<double> acc;
    for (int k : inc[i]) acc += out.profile.contests[k].reward;
    prize_total[i] = acc.value();
    if (!inc[i].empty()) {
      out.lambda[i] = prize_total[i] / (4.0 * instance.efforts[i]);
    }
  }
  for (ContestConfig& c : out.profile.contests) {
    const double la = out.lambda[c.participants[0]];
    const double lb = out.lambda[c.participants[1]];
    c.biases = {la / (la + lb), lb / (la + lb)};
    for (int i : c.participants) {
      out.efforts.set(i, c.id,
                      instance.efforts[i] * c.reward / prize_total[i]);
    }
  }
  return out;
}

TargetBiases biases_for_targets(const Instance& instance,
                                const ContestList& fixed,
                                const ContestList& variable,
                                const std::vector<double>& targets,
                                const SolverConfig& config) {
  if (targets.size() != variable.size()) {
    throw StructuralError("one target per variable contest is required");
  }
  const int n = instance.num_contestants();
  Vector a = Vector::Zero(n);
  std::vector<CompensatedSum<double>> acc(n);
  for (size_t k = 0; k < variable.size(); ++k) {
    const double p = targets[k];
    if (!(p > 0.0 && p < 1.0)) {
      throw DomainError("target probabilities must lie in (0, 1)");
    }
    const ContestConfig& c = variable[k];
    for (int i : c.participants) {
      if (i < 0 || i >= n) throw StructuralError("unknown participant");
      acc[i] += c.reward * p * (1.0 - p);
    }
  }
  for (int i = 0; i < n; ++i) a[i] = acc[i].value();

  TargetBiases out;
  out.trace = solve_emv(instance, fixed, config, a);
  out.lambda = out.trace.lambda;
  for (size_t k = 0; k < variable.size(); ++k) {
    ContestConfig c = variable[k];
    const double p0 = targets[k];
    const double p1 = 1.0 - p0;
    const double w0 = p0 * out.lambda[c.participants[0]];
    const double w1 = p1 * out.lambda[c.participants[1]];
    c.biases = {w0 / (w0 + w1), w1 / (w0 + w1)};
    out.contests.push_back(c);
  }
  return out;
}

Vector CongestionState::loads() const {
  Vector c = Vector::Zero(values.size());
  for (size_t j = 0; j < strategies.size(); ++j) {
    for (int i : strategies[j]) c[i] += weights[static_cast<int>(j)];
  }
  return c;
}

double CongestionState::agent_value(int j) const {
  return deviation_value(j, strategies[j]);
}

double CongestionState::deviation_value(int j,
                                        const std::array<int, 2>& pair) const {
  const Vector r = agent_rewards(*this, j);
  return r[pair[0]] + r[pair[1]];
}

std::array<int, 2> congestion_best_response(const CongestionState& state,
                                            int j) {
  const Vector r = agent_rewards(state, j);
  const int n = static_cast<int>(r.size());
  if (n < 2) throw DomainError("need at least two resources");
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (r[i] > r[best]) best = i;
  }
  int second = best == 0 ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    if (i != best && r[i] > r[second]) second = i;
  }
  return sorted_pair(best, second);
}

std::vector<double> lexicographic_potential(const CongestionState& state) {
  const Vector c = state.loads();
  std::vector<double> out(c.size());
  for (int i = 0; i < c.size(); ++i) {
    out[i] = c[i] > 0.0 ? state.values[i] / c[i]
                        : std::numeric_limits<double>::infinity();
  }
  std::sort(out.begin(), out.end());
  return out;
}

PneResult first_substage_pne(const Instance& instance, long max_steps) {
  const int n = instance.num_contestants();
  const int m = instance.num_designers();
  if (n < 2) throw DomainError("need at least two contestants");
  PneResult out;
  out.state.weights = instance.budgets;
  out.state.values = instance.efforts;
  out.state.strategies.assign(m, std::array<int, 2>{0, 1});
  out.initial_potential.push_back(lexicographic_potential(out.state));

  std::vector<double> potential = out.initial_potential.front();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j < m; ++j) {
      const double current = out.state.agent_value(j);
      const std::array<int, 2> br = congestion_best_response(out.state, j);
      if (!(out.state.deviation_value(j, br) > current + tolerance_for(current))) {
        continue;
      }
      // Improve by a single swap: drop the weaker current resource for the
      // strongest unused one.
      const Vector r = agent_rewards(out.state, j);
      const std::array<int, 2> from = out.state.strategies[j];
      // strategies are stored sorted, so on ties the higher index goes.
      const int keep = r[from[1]] <= r[from[0]] ? from[0] : from[1];
      int add = -1;
      for (int i = 0; i < n; ++i) {
        if (i == from[0] || i == from[1]) continue;
        if (add < 0 || r[i] > r[add]) add = i;
      }
      out.state.strategies[j] = sorted_pair(keep, add);
      PneStep step{j, from, out.state.strategies[j],
                   lexicographic_potential(out.state)};
      if (!lex_greater(step.potential, potential)) {
        out.potential_increasing = false;
      }
      potential = step.potential;
      out.steps.push_back(std::move(step));
      changed = true;
      if (static_cast<long>(out.steps.size()) > max_steps) {
        out.violations.push_back("improvement-step bound exceeded");
        return out;
      }
    }
  }

  for (int j = 0; j < m; ++j) {
    const double current = out.state.agent_value(j);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const double dev = out.state.deviation_value(j, {a, b});
        if (dev > current + tolerance_for(current)) {
          std::ostringstream os;
          os.precision(17);
          os << "agent " << j << " improves to {" << a << "," << b << "}: "
             << dev << " > " << current;
          out.violations.push_back(os.str());
        }
      }
    }
  }
  out.certified = out.violations.empty();
  return out;
}

WdeReport build_wde(const Instance& instance,
                    const std::vector<double>& bias_factors,
                    const SolverConfig& config) {
  const auto problems = validate_instance(instance);
  if (!problems.empty()) throw DomainError(problems.front());
  const int m = instance.num_designers();

  WdeReport out;
  out.pne = first_substage_pne(instance);
  FirstStageStrategy first(m);
  for (int j = 0; j < m; ++j) {
    first[j] = {instance.budgets[j], out.pne.state.strategies[j]};
  }
  BalancedOutcome bal = balancing_biases(instance, first);
  out.profile = std::move(bal.profile);
  out.lambda = std::move(bal.lambda);
  out.efforts = std::move(bal.efforts);

  out.emv = check_emv(instance, out.profile.contests, out.lambda, 1e-12);
  out.balanced = true;
  for (const ContestConfig& c : out.profile.contests) {
    const ProbabilityPair pq = hat_p_q(out.lambda, c);
    if (std::abs(pq.p[0] - 0.5) > 1e-15 || std::abs(pq.p[1] - 0.5) > 1e-15) {
      out.balanced = false;
    }
  }

  out.designer_utilities = utilities(instance, out.profile, out.efforts).designers;
  const Vector loads = out.pne.state.loads();
  out.formula_utilities = Vector::Zero(m);
  for (int j = 0; j < m; ++j) {
    CompensatedSum<double> acc;
    for (int i : out.pne.state.strategies[j]) {
      acc += instance.efforts[i] * instance.budgets[j] / loads[i];
    }
    out.formula_utilities[j] = acc.value();
  }
  bool utilities_match = true;
  for (int j = 0; j < m; ++j) {
    const double f = out.formula_utilities[j];
    if (std::abs(out.designer_utilities[j] - f) > 1e-10 * std::abs(f)) {
      utilities_match = false;
    }
  }

  if (!bias_factors.empty()) {
    DeviationGrid grid;
    grid.bias_factors = bias_factors;
    for (int j = 0; j < m; ++j) {
      DeviationSearchResult r = designer_deviation_search(
          instance, out.profile, j, grid, PrizeModel::kIndivisible, config);
      const double gain = (r.best_utility - r.baseline_utility) /
                          std::max(std::abs(r.baseline_utility), 1e-300);
      out.max_improvement = std::max(out.max_improvement, gain);
      out.deviation_checks.push_back(std::move(r));
    }
  }
  out.certified = out.emv.certified && out.balanced && out.pne.certified &&
                  out.pne.potential_increasing && utilities_match &&
                  out.max_improvement <= 1e-9;
  return out;
}

}  // namespace plcc
