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

#ifndef PLCC_ORACLE_HPP_
#define PLCC_ORACLE_HPP_

// Independent checks: exact best responses, ε-equilibrium verification,
// monotonicity probes, the demand Jacobian and designer deviation search.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plcc/emv.hpp"
#include "plcc/model.hpp"

namespace plcc {

struct BestResponseResult {
  double sup_value = 0.0;
  // Contest id -> effort; present iff the supremum is attained.
  std::optional<std::map<std::string, double>> effort;
  std::vector<std::string> open_contests;
  double multiplier = 0.0;  // μ of the water-filling step, 0 if unused
};

// opponent_efforts maps the id of every contest involving i to the raw
// (unbiased) effort of i's opponent there.
BestResponseResult best_response(
    const Instance& instance, const ContestList& contests, int i,
    const std::map<std::string, double>& opponent_efforts);

struct EpsilonRow {
  double achieved = 0.0;
  double sup = 0.0;
  double ratio = 1.0;
};

struct EpsilonReport {
  std::vector<EpsilonRow> rows;
  double min_ratio = 1.0;
  bool pass = false;
  std::vector<std::string> violations;  // infeasibility of x, if any
};

EpsilonReport verify_epsilon_equilibrium(const Instance& instance,
                                         const DesignerProfile& profile,
                                         const EffortProfile& x, double eps);

// Σ_i (λ′_i − λ_i)(T̂_i(λ′) − T̂_i(λ)).
double monotonicity_probe(const Instance& instance, const ContestList& contests,
                          const Vector& lambda, const Vector& lambda_prime);

// J_{ik} = ∂T̂_i/∂λ_k; requires λ > 0 entrywise.
Matrix demand_jacobian(const Instance& instance, const ContestList& contests,
                       const Vector& lambda);

// Candidate replacement for designer j's whole contest list.
struct DeviationCandidate {
  std::string label;
  ContestList contests;
};

// bias_factors multiply the first participant's bias. prize_levels are
// rewards as fractions of B_j (indivisible model) or fractions of a contest's
// prize moved to another of the designer's contests (divisible model).
// participant_pairs are only used by the indivisible model; empty keeps the
// current pair.
struct DeviationGrid {
  std::vector<double> bias_factors;
  std::vector<double> prize_levels;
  std::vector<std::array<int, 2>> participant_pairs;
};

std::vector<DeviationCandidate> deviation_candidates(
    const Instance& instance, const DesignerProfile& profile, int j,
    const DeviationGrid& grid, PrizeModel mode);

struct DeviationAuditRow {
  std::string label;
  bool solved = false;
  double utility = 0.0;
  double residual = 0.0;
  bool zero_multiplier = false;
  std::string note;
};

struct DeviationSearchResult {
  double baseline_utility = 0.0;
  double best_utility = 0.0;
  std::optional<DeviationCandidate> best;  // empty if nothing was solved
  std::vector<DeviationAuditRow> audit;
};

// Designer j's equilibrium utility under `profile`, via solve + reconstruct.
double designer_equilibrium_utility(const Instance& instance,
                                    const DesignerProfile& profile, int j,
                                    const SolverConfig& config,
                                    SolverTrace* trace = nullptr);

DeviationSearchResult designer_deviation_search(
    const Instance& instance, const DesignerProfile& profile, int j,
    const std::vector<DeviationCandidate>& candidates,
    const SolverConfig& config);

DeviationSearchResult designer_deviation_search(
    const Instance& instance, const DesignerProfile& profile, int j,
    const DeviationGrid& grid, PrizeModel mode, const SolverConfig& config);

// CSV with header "candidate,utility,solver_residual,solved,zero_multiplier".
std::string audit_csv(const DeviationSearchResult& result);

}  // namespace plcc

#endif  // PLCC_ORACLE_HPP_
