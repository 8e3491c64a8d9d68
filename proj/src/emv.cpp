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

#include "plcc/emv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plcc/formulas.hpp"
#include "plcc/summation.hpp"

namespace plcc {
namespace {

constexpr double kAbsoluteFloor = 1e-300;
constexpr double kPolishFactor = 1e-3;
constexpr int kPolishSteps = 8;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_solvable(const Instance& instance, const ContestList& contests) {
  std::vector<std::string> v = validate_instance(instance);
  if (v.empty()) v = validate_contests(instance.num_contestants(), contests);
  if (!v.empty()) {
    std::string msg = "invalid contestant-stage input:";
    for (const std::string& s : v) msg += " " + s + ";";
    throw DomainError(msg);
  }
}

struct Problem {
  const Instance& instance;
  const ContestList& contests;
  Vector a;
  std::vector<bool> active;
  Vector floor;
};

// Z_i = T̂_i + a_i/λ_i − T_i.
Vector excess(const Problem& p, const Vector& lambda) {
  const Vector demand = demand_totals<double>(p.contests, lambda);
  const int n = static_cast<int>(lambda.size());
  Vector z = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!p.active[i]) continue;
    CompensatedSum<double> acc(demand[i]);
    if (p.a[i] > 0.0) acc += p.a[i] / lambda[i];
    acc -= p.instance.efforts[i];
    z[i] = acc.value();
  }
  return z;
}

// A contestant with a_i = 0 resting on the floor with excess supply is
// complementary-slack: condition 3 of the characterization.
bool pinned(const Problem& p, const Vector& lambda, const Vector& z, int i) {
  return p.a[i] == 0.0 && lambda[i] <= p.floor[i] && z[i] <= 0.0;
}

Vector relative_residuals(const Problem& p, const Vector& lambda,
                          const Vector& z) {
  const int n = static_cast<int>(lambda.size());
  Vector r = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!p.active[i] || pinned(p, lambda, z, i)) continue;
    r[i] = z[i] / p.instance.efforts[i];
  }
  return r;
}

Vector initial_lambda(const Problem& p, InitMode mode,
                      const std::vector<std::vector<int>>& inc) {
  const int n = p.instance.num_contestants();
  Vector lambda = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!p.active[i]) continue;
    const double t = p.instance.efforts[i];
    if (mode == InitMode::kOnes) {
      lambda[i] = 1.0;
    } else if (!inc[i].empty()) {
      CompensatedSum<double> r;
      for (int k : inc[i]) r += p.contests[k].reward;
      lambda[i] = r.value() / (4.0 * t);
    } else {
      lambda[i] = p.a[i] / t;
    }
    lambda[i] = std::max(lambda[i], p.floor[i]);
  }
  return lambda;
}

// Newton direction in multiplicative coordinates: λ_new = λ ∘ (1 + γ d).
Vector newton_direction(const Problem& p, const Vector& lambda,
                        const Vector& z, bool* fallback) {
  const int n = static_cast<int>(lambda.size());
  std::vector<int> free;
  for (int i = 0; i < n; ++i) {
    if (p.active[i] && !pinned(p, lambda, z, i)) free.push_back(i);
  }
  Vector d = Vector::Zero(n);
  if (free.empty()) return d;
  const Matrix jac = demand_jacobian_kernel<double>(p.contests, lambda);
  const int f = static_cast<int>(free.size());
  Matrix js(f, f);
  Vector rhs(f);
  for (int r = 0; r < f; ++r) {
    const int i = free[r];
    const double t = p.instance.efforts[i];
    for (int c = 0; c < f; ++c) {
      const int k = free[c];
      double v = jac(i, k);
      if (i == k && p.a[i] > 0.0) v -= p.a[i] / (lambda[i] * lambda[i]);
      js(r, c) = v * lambda[k] / t;
    }
    rhs[r] = -z[i] / t;
  }
  const Vector sol = js.colPivHouseholderQr().solve(rhs);
  *fallback = !sol.allFinite();
  for (int r = 0; r < f; ++r) {
    // Plain tatonnement direction if the linear solve broke down.
    d[free[r]] = *fallback ? -rhs[r] : sol[r];
  }
  return d;
}

double sum_squares(const Vector& r) { return r.squaredNorm(); }
double max_abs(const Vector& r) {
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

// Moves a floored, unregularized λ_i with excess demand back to the root of
// Z_i in λ_i (others fixed). Z_i is decreasing in λ_i.
void reseed(const Problem& p, Vector* lambda, int i) {
  auto zi = [&](double v) {
    (*lambda)[i] = v;
    return excess(p, *lambda)[i];
  };
  double lo = p.floor[i];
  double hi = std::max(1.0, 2.0 * lo);
  while (zi(hi) > 0.0 && hi < 1e300) hi *= 16.0;
  for (int k = 0; k < 2000 && hi > lo * (1.0 + 1e-15); ++k) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    if (zi(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  (*lambda)[i] = hi;
}

void snap_zero_multipliers(const Problem& p, SolverTrace* trace) {
  Vector snapped = trace->lambda;
  for (int i = 0; i < snapped.size(); ++i) {
    if (p.active[i] && p.a[i] == 0.0 && snapped[i] <= p.floor[i]) {
      snapped[i] = 0.0;
    }
  }
  if (snapped != trace->lambda && is_valid_multiplier(snapped, p.contests)) {
    trace->lambda = snapped;
    trace->diagnostics.push_back("floored multipliers reported as exact zeros");
  }
}

}  // namespace

std::string to_string(StepMode mode) {
  switch (mode) {
    case StepMode::kAdaptive:
      return "adaptive";
    case StepMode::kGuaranteed:
      return "guaranteed";
    case StepMode::kFixed:
      return "fixed";
  }
  return "unknown";
}

double hat_x(const Vector& lambda, const ContestConfig& contest, int i) {
  const int op = contest.opponent_of(i);
  return demand<double>(contest.reward, contest.bias_of(i),
                        contest.opponent_bias_of(i), lambda[i], lambda[op]);
}

double hat_T(const Vector& lambda, const ContestList& contests, int i) {
  CompensatedSum<double> acc;
  for (const ContestConfig& c : contests) {
    if (c.involves(i)) acc += hat_x(lambda, c, i);
  }
  return acc.value();
}

Vector hat_T_all(const Vector& lambda, const ContestList& contests) {
  return demand_totals<double>(contests, lambda);
}

ProbabilityPair hat_p_q(const Vector& lambda, const ContestConfig& contest) {
  const int a = contest.participants[0];
  const int b = contest.participants[1];
  ProbabilityPair out;
  out.p[0] = win_probability<double>(contest.biases[0], contest.biases[1],
                                     lambda[a], lambda[b]);
  out.p[1] = win_probability<double>(contest.biases[1], contest.biases[0],
                                     lambda[b], lambda[a]);
  out.q = out.p[0] * out.p[1];
  return out;
}

bool is_valid_multiplier(const Vector& lambda, const ContestList& contests) {
  for (const ContestConfig& c : contests) {
    if (!(lambda[c.participants[0]] + lambda[c.participants[1]] > 0.0)) {
      return false;
    }
  }
  return true;
}

EmvCheck check_emv(const Instance& instance, const ContestList& contests,
                   const Vector& lambda, double tol,
                   const std::optional<Vector>& a) {
  EmvCheck out;
  const int n = instance.num_contestants();
  if (lambda.size() != n) {
    out.violations.push_back("multiplier vector has wrong length");
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (!(lambda[i] >= 0.0)) {
      out.violations.push_back("negative multiplier for contestant " +
                               std::to_string(i));
    }
  }
  for (const ContestConfig& c : contests) {
    if (!(lambda[c.participants[0]] + lambda[c.participants[1]] > 0.0)) {
      out.violations.push_back("validity: contest " + c.id +
                               " has zero multiplier sum");
    }
  }
  if (!out.violations.empty()) return out;
  out.demand = hat_T_all(lambda, contests);
  if (a) {
    for (int i = 0; i < n; ++i) {
      if ((*a)[i] > 0.0) {
        out.demand[i] = lambda[i] > 0.0
                            ? out.demand[i] + (*a)[i] / lambda[i]
                            : std::numeric_limits<double>::infinity();
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const double t = instance.efforts[i];
    const double d = out.demand[i];
    if (lambda[i] > 0.0) {
      if (!(std::abs(d - t) <= tol * t)) {
        out.violations.push_back("demand mismatch for contestant " +
                                 std::to_string(i) + ": " + fmt(d) +
                                 " vs " + fmt(t));
      }
    } else if (!(d <= (1.0 + tol) * t)) {
      out.violations.push_back("zero multiplier with excess demand for "
                               "contestant " +
                               std::to_string(i) + ": " + fmt(d) + " > " +
                               fmt(t));
    }
  }
  out.certified = out.violations.empty();
  return out;
}

Vector default_regularization(const Instance& instance,
                              const ContestList& contests,
                              double epsilon_prime) {
  const int n = instance.num_contestants();
  const auto inc = incidence(n, contests);
  Vector a = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (inc[i].empty()) continue;
    const double t = instance.efforts[i];
    double best = std::numeric_limits<double>::infinity();
    for (int k : inc[i]) {
      const ContestConfig& c = contests[k];
      const int op = c.opponent_of(i);
      const double ratio = c.opponent_bias_of(i) / c.bias_of(i);
      best = std::min(best, c.reward / (t + ratio * instance.efforts[op]));
    }
    a[i] = epsilon_prime * epsilon_prime * t * best;
  }
  return a;
}

GuaranteedBox guaranteed_box(const Instance& instance,
                             const ContestList& contests, const Vector& a) {
  const int n = instance.num_contestants();
  const auto inc = incidence(n, contests);
  GuaranteedBox box{Vector::Zero(n), Vector::Zero(n),
                    std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n; ++i) {
    if (inc[i].empty() && a[i] == 0.0) continue;
    const double t = instance.efforts[i];
    CompensatedSum<double> rs;
    for (int k : inc[i]) rs += contests[k].reward;
    const double r = rs.value();
    box.lower[i] = std::min(a[i] / (2.0 * t), 1.0);
    box.upper[i] = std::max((r / 2.0 + 2.0 * a[i]) / t, 1.0);
    const double second =
        a[i] > 0.0 ? box.upper[i] / (r * t / a[i] + 2.0 * t) : 0.0;
    box.gamma = std::min({box.gamma, box.lower[i] / t, second});
  }
  if (!std::isfinite(box.gamma)) box.gamma = 0.0;
  return box;
}

SolverTrace solve_emv(const Instance& instance, const ContestList& contests,
                      const SolverConfig& config,
                      const std::optional<Vector>& a_given) {
  if (!(config.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (config.step_mode == StepMode::kFixed && !(config.fixed_step > 0.0)) {
    throw DomainError("fixed step size must be positive");
  }
  if (config.max_iterations <= 0) {
    throw DomainError("max_iterations must be positive");
  }
  require_solvable(instance, contests);
  const int n = instance.num_contestants();
  const double eps_prime = config.epsilon / 4.0;
  const auto inc = incidence(n, contests);

  Problem p{instance, contests,
            a_given ? *a_given
                    : default_regularization(instance, contests, eps_prime),
            std::vector<bool>(n, false), Vector::Zero(n)};
  if (p.a.size() != n) throw DomainError("regularization vector has wrong length");
  for (int i = 0; i < n; ++i) {
    if (!(p.a[i] >= 0.0) || !std::isfinite(p.a[i])) {
      throw DomainError("regularization entries must be finite and >= 0");
    }
    p.active[i] = !inc[i].empty() || p.a[i] > 0.0;
  }
  const GuaranteedBox box = guaranteed_box(instance, contests, p.a);
  for (int i = 0; i < n; ++i) {
    p.floor[i] = p.active[i] ? std::max(box.lower[i], kAbsoluteFloor) : 0.0;
  }

  SolverTrace trace;
  trace.a_vector = p.a;
  trace.epsilon_prime = eps_prime;
  trace.step_mode = config.step_mode;

  Vector lambda = initial_lambda(p, config.init_mode, inc);
  if (config.record_iterates) trace.iterates.push_back(lambda);

  double gamma = 0.0;
  if (config.step_mode == StepMode::kGuaranteed) {
    gamma = box.gamma;
    if (!(gamma > 0.0)) {
      throw DomainError(
          "guaranteed step needs a positive regularization entry for every "
          "invited contestant");
    }
  } else if (config.step_mode == StepMode::kFixed) {
    gamma = config.fixed_step;
  }
  trace.step_size = gamma;

  long clamps = 0;
  int polish = 0;
  Vector z = excess(p, lambda);
  Vector r = relative_residuals(p, lambda, z);
  for (long it = 0;; ++it) {
    const double res = max_abs(r);
    trace.residual_history.push_back(res);
    trace.converged = res <= eps_prime;
    if (trace.converged) {
      // Newton steps are cheap near the root; a few more keep ill-conditioned
      // multipliers from depending on the starting point.
      if (config.step_mode != StepMode::kAdaptive ||
          res <= kPolishFactor * eps_prime || polish >= kPolishSteps) {
        break;
      }
      ++polish;
    } else if (it >= config.max_iterations) {
      break;
    }

    if (config.step_mode == StepMode::kAdaptive) {
      bool reseeded = false;
      for (int i = 0; i < n; ++i) {
        if (p.active[i] && p.a[i] == 0.0 && lambda[i] <= p.floor[i] &&
            z[i] > 0.0) {
          reseed(p, &lambda, i);
          reseeded = true;
        }
      }
      if (reseeded) {
        z = excess(p, lambda);
        r = relative_residuals(p, lambda, z);
      }
      bool fallback = false;
      const Vector d = newton_direction(p, lambda, z, &fallback);
      if (fallback) {
        trace.diagnostics.push_back("iteration " + std::to_string(it) +
                                    ": singular Jacobian, tatonnement step");
      }
      double step = 1.0;
      for (int i = 0; i < n; ++i) {
        // Regularized coordinates cannot reach zero; keep them well inside.
        if (p.a[i] > 0.0 && d[i] < 0.0) step = std::min(step, 0.9 / -d[i]);
      }
      const double phi0 = sum_squares(r);
      bool accepted = false;
      while (step > 1e-30) {
        Vector trial = lambda;
        std::vector<int> clamped;
        for (int i = 0; i < n; ++i) {
          if (!p.active[i]) continue;
          trial[i] = lambda[i] * (1.0 + step * d[i]);
          if (!(trial[i] >= p.floor[i])) {
            trial[i] = p.floor[i];
            clamped.push_back(i);
          }
        }
        Vector tz = excess(p, trial);
        // Only land on the floor where complementarity holds there.
        bool capped = false;
        for (int i : clamped) {
          if (tz[i] > 0.0) {
            trial[i] = std::max(0.1 * lambda[i], p.floor[i]);
            capped = true;
          }
        }
        if (capped) tz = excess(p, trial);
        const Vector tr = relative_residuals(p, trial, tz);
        const double phi1 = sum_squares(tr);
        if (phi1 <= (1.0 - 2e-4 * step) * phi0 || max_abs(tr) <= eps_prime) {
          if (!clamped.empty()) ++clamps;
          lambda = trial;
          z = tz;
          r = tr;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (!trace.converged) {
          trace.diagnostics.push_back("line search stalled at iteration " +
                                      std::to_string(it));
        }
        trace.iterations = it;
        break;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        if (!p.active[i]) continue;
        lambda[i] += gamma * z[i];
        if (!(lambda[i] >= p.floor[i])) {
          lambda[i] = p.floor[i];
          ++clamps;
        }
      }
      z = excess(p, lambda);
      r = relative_residuals(p, lambda, z);
    }
    trace.iterations = it + 1;
    if (config.record_iterates) trace.iterates.push_back(lambda);
  }
  if (clamps > 0) {
    trace.diagnostics.push_back("zero-multiplier floor activated " +
                                std::to_string(clamps) + " times");
  }
  trace.lambda = lambda;
  trace.residuals = r;
  if (!trace.converged) {
    const std::string msg =
        "multiplier solver did not reach residual " + fmt(eps_prime) +
        " (last " + fmt(trace.residual_history.back()) + " after " +
        std::to_string(trace.iterations) + " iterations)";
    throw NonConvergenceError(msg, std::move(trace));
  }
  snap_zero_multipliers(p, &trace);
  return trace;
}

EffortProfile reconstruct_equilibrium(const Instance& instance,
                                      const Vector& lambda,
                                      const ContestList& contests,
                                      double scale) {
  if (!(scale > 0.0)) throw DomainError("reconstruction scale must be positive");
  if (!is_valid_multiplier(lambda, contests)) {
    throw InvalidMultiplierError("cannot reconstruct from an invalid vector");
  }
  const Vector scaled = scale * lambda;
  EffortProfile x;
  for (const ContestConfig& c : contests) {
    for (int i : c.participants) x.set(i, c.id, hat_x(scaled, c, i));
  }
  const Vector totals = hat_T_all(scaled, contests);
  for (int i = 0; i < instance.num_contestants(); ++i) {
    const double t = instance.efforts[i];
    if (totals[i] > t * (1.0 + 1e-9)) {
      throw DomainError("reconstructed efforts exceed the budget of contestant " +
                        std::to_string(i) + ": " + fmt(totals[i]) + " > " +
                        fmt(t));
    }
  }
  return x;
}

}  // namespace plcc
