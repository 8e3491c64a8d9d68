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

#include "plcc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plcc/formulas.hpp"
#include "plcc/summation.hpp"

namespace plcc {
namespace {

struct Term {
  std::string id;
  double reward;
  double alpha;
  double y;  // biased opponent effort, > 0
};

double water_level_effort(const Term& t, double mu) {
  const double x = (std::sqrt(t.reward * t.alpha * t.y / mu) - t.y) / t.alpha;
  return x > 0.0 ? x : 0.0;
}

double total_effort(const std::vector<Term>& terms, double mu) {
  CompensatedSum<double> acc;
  for (const Term& t : terms) acc += water_level_effort(t, mu);
  return acc.value();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

BestResponseResult best_response(
    const Instance& instance, const ContestList& contests, int i,
    const std::map<std::string, double>& opponent_efforts) {
  if (i < 0 || i >= instance.num_contestants()) {
    throw StructuralError("best response for unknown contestant");
  }
  const double budget = instance.efforts[i];
  BestResponseResult out;
  CompensatedSum<double> open_value;
  std::vector<Term> terms;
  for (const ContestConfig& c : contests) {
    if (!c.involves(i)) continue;
    auto it = opponent_efforts.find(c.id);
    if (it == opponent_efforts.end()) {
      throw StructuralError("missing opponent effort for contest " + c.id);
    }
    if (!(it->second >= 0.0)) throw DomainError("negative opponent effort");
    const double y = c.opponent_bias_of(i) * it->second;
    if (y == 0.0) {
      out.open_contests.push_back(c.id);
      open_value += c.reward;
    } else {
      terms.push_back({c.id, c.reward, c.bias_of(i), y});
    }
  }

  std::map<std::string, double> effort;
  CompensatedSum<double> value(open_value.value());
  if (!terms.empty()) {
    // Demand at μ is zero for μ ≥ max R α / y, and at least the budget for
    // μ ≤ min R α y / (α T + y)^2.
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (const Term& t : terms) {
      hi = std::max(hi, t.reward * t.alpha / t.y);
      const double s = t.alpha * budget + t.y;
      lo = std::min(lo, t.reward * t.alpha * t.y / (s * s));
    }
    for (int widen = 0; total_effort(terms, lo) < budget; ++widen) {
      if (widen > 2000) throw DomainError("best-response bracket failure");
      lo *= 0.5;
    }
    for (int widen = 0; total_effort(terms, hi) > budget; ++widen) {
      if (widen > 2000) throw DomainError("best-response bracket failure");
      hi *= 2.0;
    }
    double mu = std::sqrt(lo) * std::sqrt(hi);
    for (int it = 0; it < 400; ++it) {
      mu = std::sqrt(lo) * std::sqrt(hi);
      const double s = total_effort(terms, mu);
      if (std::abs(s - budget) <= 1e-12 * budget) break;
      if (s > budget) {
        lo = mu;
      } else {
        hi = mu;
      }
      if (!(lo < hi) || hi / lo - 1.0 < 1e-16) break;
    }
    out.multiplier = mu;
    for (const Term& t : terms) {
      const double x = water_level_effort(t, mu);
      effort[t.id] = x;
      value += t.reward * lottery(t.alpha * x, t.y);
    }
  }
  out.sup_value = value.value();
  if (out.open_contests.empty()) out.effort = std::move(effort);
  return out;
}

EpsilonReport verify_epsilon_equilibrium(const Instance& instance,
                                         const DesignerProfile& profile,
                                         const EffortProfile& x, double eps) {
  const int n = instance.num_contestants();
  EpsilonReport report;
  for (int i = 0; i < n; ++i) {
    if (x.total(i) > instance.efforts[i] * (1.0 + 1e-9)) {
      report.violations.push_back("contestant " + std::to_string(i) +
                                  " exceeds her budget: " + fmt(x.total(i)));
    }
  }
  const Utilities u = utilities(instance, profile, x);
  for (int i = 0; i < n; ++i) {
    std::map<std::string, double> opp;
    for (const ContestConfig& c : profile.contests) {
      if (c.involves(i)) opp[c.id] = x.at(c.opponent_of(i), c.id);
    }
    const BestResponseResult br =
        best_response(instance, profile.contests, i, opp);
    EpsilonRow row;
    row.achieved = u.contestants[i];
    row.sup = br.sup_value;
    row.ratio = br.sup_value > 0.0 ? row.achieved / row.sup : 1.0;
    report.min_ratio = std::min(report.min_ratio, row.ratio);
    report.rows.push_back(row);
  }
  report.pass = report.violations.empty() && report.min_ratio >= 1.0 - eps;
  return report;
}

double monotonicity_probe(const Instance& instance, const ContestList& contests,
                          const Vector& lambda, const Vector& lambda_prime) {
  const int n = instance.num_contestants();
  if (lambda.size() != n || lambda_prime.size() != n) {
    throw StructuralError("multiplier vectors have the wrong length");
  }
  if (!is_valid_multiplier(lambda, contests) ||
      !is_valid_multiplier(lambda_prime, contests)) {
    throw InvalidMultiplierError("monotonicity probe needs valid vectors");
  }
  const Vector d0 = hat_T_all(lambda, contests);
  const Vector d1 = hat_T_all(lambda_prime, contests);
  CompensatedSum<double> acc;
  for (int i = 0; i < n; ++i) {
    acc += (lambda_prime[i] - lambda[i]) * (d1[i] - d0[i]);
  }
  return acc.value();
}

Matrix demand_jacobian(const Instance& instance, const ContestList& contests,
                       const Vector& lambda) {
  if (lambda.size() != instance.num_contestants()) {
    throw StructuralError("multiplier vector has the wrong length");
  }
  if (!(lambda.array() > 0.0).all()) {
    throw DomainError("demand Jacobian needs strictly positive multipliers");
  }
  return demand_jacobian_kernel<double>(contests, lambda);
}

std::vector<DeviationCandidate> deviation_candidates(
    const Instance& instance, const DesignerProfile& profile, int j,
    const DeviationGrid& grid, PrizeModel mode) {
  const std::vector<int> own = profile.contests_of(j);
  if (own.empty()) throw StructuralError("designer has no contests to vary");
  const std::vector<double> factors =
      grid.bias_factors.empty() ? std::vector<double>{1.0} : grid.bias_factors;
  std::vector<DeviationCandidate> out;
  auto own_contests = [&]() {
    ContestList list;
    for (int k : own) list.push_back(profile.contests[k]);
    return list;
  };

  if (mode == PrizeModel::kIndivisible) {
    const ContestConfig& base = profile.contests[own.front()];
    std::vector<std::array<int, 2>> pairs = grid.participant_pairs;
    if (pairs.empty()) pairs.push_back(base.participants);
    std::vector<double> rewards;
    for (double level : grid.prize_levels) {
      rewards.push_back(level * instance.budgets[j]);
    }
    if (rewards.empty()) rewards.push_back(base.reward);
    for (const auto& pair : pairs) {
      for (double reward : rewards) {
        for (double f : factors) {
          ContestConfig c = base;
          c.participants = pair;
          c.reward = reward;
          if (pair != base.participants) c.biases = {1.0, 1.0};
          c.biases[0] *= f;
          std::ostringstream label;
          label.precision(17);
          label << "pair=(" << pair[0] << " " << pair[1]
                << ") reward=" << reward << " bias_factor=" << f;
          out.push_back({label.str(), {c}});
        }
      }
    }
    return out;
  }

  for (size_t a = 0; a < own.size(); ++a) {
    for (double f : factors) {
      ContestList list = own_contests();
      list[a].biases[0] *= f;
      std::ostringstream label;
      label.precision(17);
      label << list[a].id << " bias_factor=" << f;
      out.push_back({label.str(), list});
    }
  }
  for (size_t a = 0; a < own.size(); ++a) {
    for (size_t b = 0; b < own.size(); ++b) {
      if (a == b) continue;
      for (double s : grid.prize_levels) {
        if (!(s > 0.0 && s < 1.0)) continue;
        ContestList list = own_contests();
        const double moved = s * list[a].reward;
        list[a].reward -= moved;
        list[b].reward += moved;
        std::ostringstream label;
        label.precision(17);
        label << "move " << s << " of " << list[a].id << " to "
              << list[b].id;
        out.push_back({label.str(), list});
      }
    }
  }
  return out;
}

double designer_equilibrium_utility(const Instance& instance,
                                    const DesignerProfile& profile, int j,
                                    const SolverConfig& config,
                                    SolverTrace* trace) {
  SolverTrace t = solve_emv(instance, profile.contests, config);
  const EffortProfile x =
      reconstruct_equilibrium(instance, t.lambda, profile.contests);
  const double u = utilities(instance, profile, x).designers[j];
  if (trace) *trace = std::move(t);
  return u;
}

DeviationSearchResult designer_deviation_search(
    const Instance& instance, const DesignerProfile& profile, int j,
    const std::vector<DeviationCandidate>& candidates,
    const SolverConfig& config) {
  if (candidates.empty()) throw DomainError("deviation grid is empty");
  DeviationSearchResult result;
  result.baseline_utility =
      designer_equilibrium_utility(instance, profile, j, config);
  result.best_utility = -std::numeric_limits<double>::infinity();
  for (const DeviationCandidate& cand : candidates) {
    DesignerProfile trial;
    for (const ContestConfig& c : profile.contests) {
      if (c.designer != j) trial.contests.push_back(c);
    }
    for (ContestConfig c : cand.contests) {
      c.designer = j;
      trial.contests.push_back(c);
    }
    DeviationAuditRow row;
    row.label = cand.label;
    try {
      SolverTrace trace;
      row.utility =
          designer_equilibrium_utility(instance, trial, j, config, &trace);
      row.solved = true;
      row.residual = trace.residual_history.back();
      for (int i = 0; i < trace.lambda.size(); ++i) {
        bool invited = false;
        for (const ContestConfig& c : trial.contests) invited |= c.involves(i);
        if (invited && trace.lambda[i] == 0.0) row.zero_multiplier = true;
      }
      if (row.zero_multiplier) {
        row.note = "zero multiplier: utility evaluated at the minimal effort";
      }
      if (row.utility > result.best_utility) {
        result.best_utility = row.utility;
        result.best = cand;
      }
    } catch (const NonConvergenceError& e) {
      row.note = std::string("skipped: ") + e.what();
      row.residual = e.trace().residual_history.empty()
                         ? 0.0
                         : e.trace().residual_history.back();
    } catch (const std::exception& e) {
      row.note = std::string("skipped: ") + e.what();
    }
    result.audit.push_back(row);
  }
  return result;
}

DeviationSearchResult designer_deviation_search(
    const Instance& instance, const DesignerProfile& profile, int j,
    const DeviationGrid& grid, PrizeModel mode, const SolverConfig& config) {
  return designer_deviation_search(
      instance, profile, j,
      deviation_candidates(instance, profile, j, grid, mode), config);
}

std::string audit_csv(const DeviationSearchResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << "candidate,utility,solver_residual,solved,zero_multiplier\n";
  for (const DeviationAuditRow& row : result.audit) {
    os << '"' << row.label << "\"," << row.utility << ',' << row.residual
       << ',' << (row.solved ? 1 : 0) << ',' << (row.zero_multiplier ? 1 : 0)
       << '\n';
  }
  return os.str();
}

}  // namespace plcc
