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

#ifndef PLCC_EMV_HPP_
#define PLCC_EMV_HPP_

// Equilibrium multiplier vectors: demand formulas, certification, the
// tatonnement solver and canonical equilibrium reconstruction.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plcc/model.hpp"

namespace plcc {

enum class StepMode { kAdaptive, kGuaranteed, kFixed };
enum class InitMode { kOnes, kScaleAware };

struct SolverConfig {
  double epsilon = 1e-6;
  StepMode step_mode = StepMode::kAdaptive;
  double fixed_step = 0.0;  // γ for StepMode::kFixed.
  long max_iterations = 100000;
  InitMode init_mode = InitMode::kOnes;
  // Keep every iterate in SolverTrace::iterates.
  bool record_iterates = false;
};

struct SolverTrace {
  Vector lambda;
  long iterations = 0;
  Vector residuals;  // Z_i / T_i at termination, 0 for excluded contestants.
  std::vector<double> residual_history;  // max_i |Z_i/T_i| per iteration.
  Vector a_vector;
  double epsilon_prime = 0.0;
  StepMode step_mode = StepMode::kAdaptive;
  double step_size = 0.0;  // γ actually used by Guaranteed/Fixed modes.
  bool converged = false;
  std::vector<Vector> iterates;
  std::vector<std::string> diagnostics;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, SolverTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

double hat_x(const Vector& lambda, const ContestConfig& contest, int i);
double hat_T(const Vector& lambda, const ContestList& contests, int i);
// T̂ for every contestant at once.
Vector hat_T_all(const Vector& lambda, const ContestList& contests);

struct ProbabilityPair {
  std::array<double, 2> p;  // in participant order
  double q = 0.0;
};
ProbabilityPair hat_p_q(const Vector& lambda, const ContestConfig& contest);

bool is_valid_multiplier(const Vector& lambda, const ContestList& contests);

struct EmvCheck {
  bool certified = false;
  std::vector<std::string> violations;
  Vector demand;  // T̂(λ), plus a/λ when a regularization vector is given.
};

// Conditions of the multiplier characterization at relative tolerance tol.
// With `a`, the demand side is T̂_i + a_i/λ_i (the regularized system).
EmvCheck check_emv(const Instance& instance, const ContestList& contests,
                   const Vector& lambda, double tol,
                   const std::optional<Vector>& a = std::nullopt);

// a_i = ε′² T_i min_{C∋i} R_C / (T_i + (α_op/α_i) T_op); 0 when i is idle.
Vector default_regularization(const Instance& instance,
                              const ContestList& contests,
                              double epsilon_prime);

struct GuaranteedBox {
  Vector lower;  // L_i
  Vector upper;  // U_i
  double gamma = 0.0;
};
GuaranteedBox guaranteed_box(const Instance& instance,
                             const ContestList& contests, const Vector& a);

SolverTrace solve_emv(const Instance& instance, const ContestList& contests,
                      const SolverConfig& config,
                      const std::optional<Vector>& a = std::nullopt);

// x_{i,C} = x̂_{i,C}(scale·λ). Throws DomainError if some contestant's total
// exceeds T_i by more than a 1e-9 relative margin.
EffortProfile reconstruct_equilibrium(const Instance& instance,
                                      const Vector& lambda,
                                      const ContestList& contests,
                                      double scale = 1.0);

std::string to_string(StepMode mode);

}  // namespace plcc

#endif  // PLCC_EMV_HPP_
