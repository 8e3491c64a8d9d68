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

#include "plcc/dpm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plcc/formulas.hpp"
#include "plcc/summation.hpp"

namespace plcc {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Index of the interval [P_k, P_{k+1}) containing point x.
int interval_of(const std::vector<double>& prefix, double x) {
  auto it = std::upper_bound(prefix.begin(), prefix.end(), x);
  const int k = static_cast<int>(it - prefix.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(prefix.size()) - 2);
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

EffortMatching effort_matching(const Vector& efforts) {
  const int n = static_cast<int>(efforts.size());
  if (n < 2) throw PreconditionError("effort matching needs two contestants");
  std::vector<double> prefix(n + 1, 0.0);
  CompensatedSum<double> running;
  for (int k = 0; k < n; ++k) {
    if (!(efforts[k] > 0.0)) throw DomainError("efforts must be positive");
    running += efforts[k];
    prefix[k + 1] = running.value();
  }
  const double total = prefix[n];
  const double half = total / 2.0;
  for (int k = 0; k < n; ++k) {
    if (efforts[k] > half) {
      throw PreconditionError("dominant contestant " + std::to_string(k) +
                              ": effort " + fmt(efforts[k]) +
                              " exceeds half the total " + fmt(half));
    }
  }

  std::vector<double> cuts{0.0, half};
  for (int k = 1; k < n; ++k) {
    if (prefix[k] < half) cuts.push_back(prefix[k]);
    if (prefix[k] > half) cuts.push_back(prefix[k] - half);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  EffortMatching out;
  out.total_half = half;
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    if (!(len > 0.0)) continue;
    const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    const int i = interval_of(prefix, mid);
    const int k = interval_of(prefix, mid + half);
    if (i == k) {
      throw PreconditionError("matching folded contestant " +
                              std::to_string(i) + " onto herself");
    }
    const int lo = std::min(i, k);
    const int hi = std::max(i, k);
    if (!out.entries.empty() && out.entries.back().i == lo &&
        out.entries.back().k == hi) {
      out.entries.back().amount += len;
    } else {
      out.entries.push_back({lo, hi, len});
    }
  }
  return out;
}

ProportionalCheck verify_proportional_conditions(const Instance& instance,
                                                 const DesignerProfile& profile,
                                                 double tol,
                                                 const SolverConfig& config) {
  const int n = instance.num_contestants();
  const int m = instance.num_designers();
  ProportionalCheck out;
  const double total_effort = compensated_sum(instance.efforts);
  for (int j = 0; j < m; ++j) {
    std::vector<CompensatedSum<double>> share(n);
    for (const ContestConfig& c : profile.contests) {
      if (c.designer != j) continue;
      for (int i : c.participants) share[i] += c.reward;
    }
    for (int i = 0; i < n; ++i) {
      const double want =
          2.0 * instance.budgets[j] * instance.efforts[i] / total_effort;
      const double got = share[i].value();
      if (!close(got, want, tol)) {
        out.violations.push_back("prize share of designer " +
                                 std::to_string(j) + " on contestant " +
                                 std::to_string(i) + ": " + fmt(got) +
                                 " vs " + fmt(want));
      }
    }
  }
  out.lambda = solve_emv(instance, profile.contests, config).lambda;
  for (const ContestConfig& c : profile.contests) {
    const ProbabilityPair pq = hat_p_q(out.lambda, c);
    if (std::abs(pq.p[0] - 0.5) > tol) {
      out.violations.push_back("winning probability in contest " + c.id +
                               " is " + fmt(pq.p[0]) + ", not 1/2");
    }
  }
  out.pass = out.violations.empty();
  return out;
}

Utilities equilibrium_utilities(const Instance& instance) {
  const double total_effort = compensated_sum(instance.efforts);
  const double total_budget = compensated_sum(instance.budgets);
  return {instance.efforts / total_effort * total_budget,
          instance.budgets / total_budget * total_effort};
}

DpmReport build_dpm_spe(const Instance& instance) {
  const auto problems = validate_instance(instance);
  if (!problems.empty()) throw DomainError(problems.front());
  const int n = instance.num_contestants();
  const int m = instance.num_designers();
  const double total_effort = compensated_sum(instance.efforts);
  const double total_budget = compensated_sum(instance.budgets);

  DpmReport out;
  out.matching = effort_matching(instance.efforts);
  for (int j = 0; j < m; ++j) {
    for (const MatchingEntry& e : out.matching.entries) {
      ContestConfig c;
      c.id = "D" + std::to_string(j + 1) + ":" + std::to_string(e.i + 1) +
             "-" + std::to_string(e.k + 1);
      c.designer = j;
      c.participants = {e.i, e.k};
      c.reward = 2.0 * instance.budgets[j] * e.amount / total_effort;
      out.profile.contests.push_back(c);
    }
  }
  out.lambda = Vector::Constant(n, total_budget / (2.0 * total_effort));
  out.efforts =
      reconstruct_equilibrium(instance, out.lambda, out.profile.contests);
  out.emv = check_emv(instance, out.profile.contests, out.lambda, 1e-12);
  out.conditions =
      verify_proportional_conditions(instance, out.profile, 1e-12);
  out.achieved = utilities(instance, out.profile, out.efforts);
  out.closed_form = equilibrium_utilities(instance);

  out.budget_spent = Vector::Zero(m);
  for (int j = 0; j < m; ++j) {
    CompensatedSum<double> acc;
    for (int k : out.profile.contests_of(j)) {
      acc += out.profile.contests[k].reward;
    }
    out.budget_spent[j] = acc.value();
    if (!close(out.budget_spent[j], instance.budgets[j], 1e-12)) {
      out.violations.push_back("budget of designer " + std::to_string(j) +
                               " not exhausted");
    }
    if (!close(out.achieved.designers[j], out.closed_form.designers[j],
               1e-10)) {
      out.violations.push_back("designer utility mismatch for " +
                               std::to_string(j));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!close(out.achieved.contestants[i], out.closed_form.contestants[i],
               1e-10)) {
      out.violations.push_back("contestant utility mismatch for " +
                               std::to_string(i));
    }
  }
  for (const std::string& v : out.emv.violations) out.violations.push_back(v);
  for (const std::string& v : out.conditions.violations) {
    out.violations.push_back(v);
  }
  out.certified = out.violations.empty();
  return out;
}

}  // namespace plcc
