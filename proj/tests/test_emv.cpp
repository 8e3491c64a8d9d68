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

#include <random>

#include "doctest.h"
#include "plcc/emv.hpp"
#include "plcc/fixtures.hpp"
#include "plcc/random.hpp"

namespace plcc {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

ContestConfig unit_contest(std::string id, int a, int b) {
  return ContestConfig{std::move(id), 0, {a, b}, 1.0, {1.0, 1.0}};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Σ Z_i^2 with Z_i = T̂_i + a_i/λ_i − T_i, written out directly.
double excess_norm(const Instance& inst, const ContestList& contests,
                   const Vector& lambda, const Vector& a) {
  double s = 0.0;
  for (int i = 0; i < inst.num_contestants(); ++i) {
    double d = 0.0;
    for (const ContestConfig& c : contests) {
      if (!c.involves(i)) continue;
      const int op = c.opponent_of(i);
      const double den = c.opponent_bias_of(i) * lambda[i] + c.bias_of(i) * lambda[op];
      d += c.reward * c.bias_of(i) * c.opponent_bias_of(i) * lambda[op] / (den * den);
    }
    if (a[i] > 0) d += a[i] / lambda[i];
    const double z = d - inst.efforts[i];
    s += z * z;
  }
  return s;
}

TEST_SUITE("emv") {

TEST_CASE("demand closed form") {
  const ContestConfig c = unit_contest("A", 0, 1);
  CHECK(hat_x(vec({4.0 / 9, 2.0 / 9}), c, 0) == doctest::Approx(0.5).epsilon(1e-15));
  const InstanceFile f = asymmetric_bias_instance();
  const Vector lambda = vec({1, 0.001, 0.001, 1});
  CHECK(hat_x(lambda, f.profile.contests[0], 1) == doctest::Approx(250).epsilon(1e-14));
  CHECK(hat_x(vec({1.0, 0.0}), c, 0) == 0.0);
  CHECK_THROWS_AS(hat_x(vec({0.0, 0.0}), c, 0), InvalidMultiplierError);
}

TEST_CASE("demand totals") {
  const InstanceFile f = asymmetric_bias_instance();
  const Vector lambda = vec({1, 0.001, 0.001, 1});
  CHECK(hat_T(lambda, f.profile.contests, 1) == doctest::Approx(251).epsilon(1e-14));
  CHECK(hat_T(lambda, f.profile.contests, 0) == doctest::Approx(0.251).epsilon(1e-14));
  const Vector all = hat_T_all(lambda, f.profile.contests);
  for (int i = 0; i < 4; ++i) {
    CHECK(all[i] == doctest::Approx(f.instance.efforts[i]).epsilon(1e-14));
  }
  CHECK(hat_T(vec({0.25, 0.25}), {unit_contest("A", 0, 1)}, 0) == 1.0);
  CHECK(hat_T(vec({0.25, 0.25, 1.0}), {unit_contest("A", 0, 1)}, 2) == 0.0);
}

TEST_CASE("winning probabilities from multipliers") {
  const InstanceFile f = divisible_bias_instance();
  const Vector lambda = vec({2.5e5, 2.5e5, 0.25, 0.25});
  const ProbabilityPair c3 = hat_p_q(lambda, f.profile.contests[2]);
  CHECK(c3.p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c3.q == doctest::Approx(0.25).epsilon(1e-15));
  const ContestConfig c = unit_contest("A", 0, 1);
  CHECK(hat_p_q(vec({4.0 / 9, 2.0 / 9}), c).p[0] == doctest::Approx(1.0 / 3));
  CHECK(hat_p_q(vec({0.0, 1.0}), c).p[0] == 1.0);
  CHECK_THROWS_AS(hat_p_q(vec({0.0, 0.0}), c), InvalidMultiplierError);
}

TEST_CASE("multiplier validity") {
  const InstanceFile f = asymmetric_bias_instance();
  CHECK(is_valid_multiplier(vec({1, 0.001, 0.001, 1}), f.profile.contests));
  CHECK_FALSE(is_valid_multiplier(Vector::Zero(4), f.profile.contests));
  CHECK(is_valid_multiplier(Vector::Zero(4), {}));
}

TEST_CASE("certification of multiplier vectors") {
  const InstanceFile f = asymmetric_bias_instance();
  const Vector lambda = vec({1, 0.001, 0.001, 1});
  CHECK(check_emv(f.instance, f.profile.contests, lambda, 1e-9).certified);
  const EmvCheck doubled =
      check_emv(f.instance, f.profile.contests, 2.0 * lambda, 1e-9);
  CHECK_FALSE(doubled.certified);
  CHECK(doubled.violations.size() == 4);
  CHECK(doubled.violations.front().find("demand mismatch") != std::string::npos);

  // Contestant 1 keeps a zero multiplier as long as her demand 4 fits.
  const ContestList chain{unit_contest("A", 0, 1), unit_contest("B", 1, 2)};
  Instance roomy{vec({100, 1, 1}), Vector::Ones(1)};
  CHECK(check_emv(roomy, chain, vec({0, 0.25, 0.25}), 1e-12).certified);
  Instance cramped{vec({3, 1, 1}), Vector::Ones(1)};
  const EmvCheck c3 = check_emv(cramped, chain, vec({0, 0.25, 0.25}), 1e-12);
  REQUIRE(c3.violations.size() == 1);
  CHECK(c3.violations.front().find("zero multiplier") != std::string::npos);
  CHECK_FALSE(check_emv(roomy, chain, vec({0, 0, 0.25}), 1e-12).certified);
}

TEST_CASE("solver reproduces published multipliers") {
  SolverConfig config;
  config.epsilon = 1e-6;
  const InstanceFile f = asymmetric_bias_instance();
  const SolverTrace t = solve_emv(f.instance, f.profile.contests, config);
  const Vector want = vec({1, 0.001, 0.001, 1});
  for (int i = 0; i < 4; ++i) CHECK(rel(t.lambda[i], want[i]) <= 1e-6);
  CHECK(t.converged);
  CHECK(t.residuals.cwiseAbs().maxCoeff() <= t.epsilon_prime);
  CHECK(t.epsilon_prime == 0.25e-6);

  const InstanceFile g = divisible_bias_instance(2.0);
  const SolverTrace u = solve_emv(g.instance, g.profile.contests, config);
  CHECK(rel(u.lambda[0], 249972.24920282728) <= 1e-6);
}

TEST_CASE("symmetric instances get symmetric multipliers") {
  const Instance inst{vec({2, 2}), Vector::Ones(1)};
  const ContestList one{unit_contest("A", 0, 1)};
  const SolverTrace t = solve_emv(inst, one, {});
  CHECK(t.lambda[0] == doctest::Approx(t.lambda[1]).epsilon(1e-15));
  CHECK(t.lambda[0] == doctest::Approx(0.125).epsilon(1e-6));
  SolverConfig fixed;
  fixed.step_mode = StepMode::kFixed;
  fixed.fixed_step = 0.01;
  fixed.epsilon = 1e-3;
  const SolverTrace s = solve_emv(inst, one, fixed);
  CHECK(s.lambda[0] == s.lambda[1]);
}

TEST_CASE("contestants without contests get a zero multiplier") {
  const InstanceFile f = three_player_symmetric_instance();
  const SolverTrace t = solve_emv(f.instance, f.profile.contests, {});
  CHECK(t.lambda[2] == 0.0);
  CHECK(t.residuals[2] == 0.0);
  CHECK(t.a_vector[2] == 0.0);
}

TEST_CASE("solver finds exact zero multipliers without regularization") {
  const ContestList chain{unit_contest("A", 0, 1), unit_contest("B", 1, 2)};
  const Instance roomy{vec({100, 1, 1}), Vector::Ones(1)};
  SolverConfig config;
  config.epsilon = 1e-12;
  const SolverTrace t = solve_emv(roomy, chain, config, Vector::Zero(3));
  CHECK(t.lambda[0] == 0.0);
  CHECK(t.lambda[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.lambda[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(check_emv(roomy, chain, t.lambda, 1e-11).certified);

  // With the default regularization the multiplier is tiny but positive.
  const SolverTrace r = solve_emv(roomy, chain, config);
  CHECK(r.lambda[0] > 0.0);
  CHECK(r.lambda[0] < 1e-20);
  CHECK(check_emv(roomy, chain, r.lambda, 1e-11, r.a_vector).certified);
}

TEST_CASE("regularization default and guaranteed box") {
  const InstanceFile f = three_player_split_instance();
  const double ep = 0.1;
  const Vector a = default_regularization(f.instance, f.profile.contests, ep);
  // Contestant 1: min(1/(1+1), 1/(1+1)); contestants 2 and 3: 1/(1+1).
  CHECK(a[0] == doctest::Approx(0.01 * 0.5));
  CHECK(a[1] == doctest::Approx(0.01 * 0.5));
  CHECK(a[2] == doctest::Approx(0.01 * 0.5));
  const GuaranteedBox box = guaranteed_box(f.instance, f.profile.contests, a);
  CHECK(box.lower[0] == doctest::Approx(a[0] / 2));
  CHECK(box.upper[0] == doctest::Approx(1.0 + 2 * a[0]));
  CHECK(box.upper[1] == 1.0);
  const double g1 = box.upper[0] / (2.0 / a[0] + 2.0);
  const double g2 = box.upper[1] / (1.0 / a[1] + 2.0);
  CHECK(box.gamma == doctest::Approx(std::min({box.lower[0], g1, g2})));
}

TEST_CASE("solver rejects bad input and reports non-convergence") {
  const InstanceFile f = asymmetric_bias_instance();
  SolverConfig bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(solve_emv(f.instance, f.profile.contests, bad), DomainError);
  ContestList broken = f.profile.contests;
  broken[0].participants = {0, 0};
  CHECK_THROWS_AS(solve_emv(f.instance, broken, {}), DomainError);
  SolverConfig slow;
  slow.step_mode = StepMode::kGuaranteed;
  slow.max_iterations = 5;
  try {
    solve_emv(f.instance, f.profile.contests, slow);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.trace().iterations == 5);
    CHECK(e.trace().residual_history.size() == 6);
    CHECK_FALSE(e.trace().converged);
  }
}

TEST_CASE("reconstruction") {
  const InstanceFile f = three_player_split_instance();
  const Vector lambda = vec({4.0 / 9, 2.0 / 9, 2.0 / 9});
  const EffortProfile x =
      reconstruct_equilibrium(f.instance, lambda, f.profile.contests);
  CHECK(x.at(0, "C1") == doctest::Approx(0.5));
  CHECK(x.at(0, "C2'") == doctest::Approx(0.5));
  CHECK(x.at(1, "C1") == doctest::Approx(1.0));
  CHECK(x.at(2, "C2'") == doctest::Approx(1.0));
  for (int i = 0; i < 3; ++i) CHECK(x.total(i) == doctest::Approx(1.0));
  CHECK_THROWS_AS(
      reconstruct_equilibrium(f.instance, 0.5 * lambda, f.profile.contests),
      DomainError);
  CHECK_THROWS_AS(
      reconstruct_equilibrium(f.instance, Vector::Zero(3), f.profile.contests),
      InvalidMultiplierError);

  const InstanceFile g = divisible_bias_instance(2.0);
  const Vector dev = vec({249972.24920282728, 249972.24920282728,
                          0.24999999999923062, 0.24999999999923062});
  const EffortProfile y =
      reconstruct_equilibrium(g.instance, dev, g.profile.contests);
  CHECK(rel(y.at(2, "C3"), 999.99999692231) <= 1e-12);
}

TEST_CASE("closed-form identities on random multipliers") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5000; ++t) {
    ContestConfig c{"A", 0, {0, 1}, log_uniform(rng, 1e-2, 1e2),
                    {log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2)}};
    const Vector lambda = vec({log_uniform(rng, 1e-3, 1e3),
                               log_uniform(rng, 1e-3, 1e3)});
    const ProbabilityPair pq = hat_p_q(lambda, c);
    const double rq = c.reward * pq.q;
    CHECK(lambda[0] * hat_x(lambda, c, 0) == doctest::Approx(rq).epsilon(1e-13));
    CHECK(lambda[1] * hat_x(lambda, c, 1) == doctest::Approx(rq).epsilon(1e-13));
    CHECK(pq.p[0] + pq.p[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pq.q <= 0.25);
    const double k = log_uniform(rng, 1e-3, 1e3);
    const Vector scaled = k * lambda;
    CHECK(hat_p_q(scaled, c).p[0] == doctest::Approx(pq.p[0]).epsilon(1e-14));
    CHECK(hat_x(scaled, c, 0) == doctest::Approx(hat_x(lambda, c, 0) / k).epsilon(1e-13));
    c.biases[1] = c.biases[0];
    CHECK(hat_x(lambda, c, 0) + hat_x(lambda, c, 1) ==
          doctest::Approx(c.reward / (lambda[0] + lambda[1])).epsilon(1e-13));
  }
  const ContestConfig even = unit_contest("A", 0, 1);
  CHECK(hat_p_q(vec({3.0, 3.0}), even).q == 0.25);
}

TEST_CASE("solutions are unique across initializations and certified") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const RandomCase rc = random_case(rng, {});
    SolverConfig ones;
    ones.epsilon = 1e-3;
    SolverConfig scale = ones;
    scale.init_mode = InitMode::kScaleAware;
    const SolverTrace a = solve_emv(rc.instance, rc.profile.contests, ones);
    const SolverTrace b = solve_emv(rc.instance, rc.profile.contests, scale);
    for (int i = 0; i < a.lambda.size(); ++i) {
      if (a.lambda[i] == 0.0) {
        CHECK(b.lambda[i] == 0.0);
        continue;
      }
      CHECK(rel(b.lambda[i], a.lambda[i]) <= 10 * a.epsilon_prime);
    }
    CHECK(check_emv(rc.instance, rc.profile.contests, a.lambda, a.epsilon_prime,
                    a.a_vector)
              .certified);
  }
}

TEST_CASE("guaranteed steps stay in the box and descend") {
  std::mt19937_64 rng(8);
  RandomCaseOptions opt;
  opt.max_contestants = 4;
  opt.max_contests = 5;
  opt.low = 0.5;
  opt.high = 2.0;
  for (int t = 0; t < 5; ++t) {
    const RandomCase rc = random_case(rng, opt);
    SolverConfig config;
    config.epsilon = 0.4;
    config.step_mode = StepMode::kGuaranteed;
    config.max_iterations = 3000;
    config.record_iterates = true;
    SolverTrace trace;
    try {
      trace = solve_emv(rc.instance, rc.profile.contests, config);
    } catch (const NonConvergenceError& e) {
      trace = e.trace();
    }
    const GuaranteedBox box =
        guaranteed_box(rc.instance, rc.profile.contests, trace.a_vector);
    CHECK(trace.step_size == box.gamma);
    double prev = std::numeric_limits<double>::infinity();
    for (const Vector& it : trace.iterates) {
      for (int i = 0; i < it.size(); ++i) {
        if (box.upper[i] == 0.0) continue;  // idle contestant
        CHECK(it[i] >= box.lower[i]);
        CHECK(it[i] <= box.upper[i]);
      }
      const double z = excess_norm(rc.instance, rc.profile.contests, it,
                                   trace.a_vector);
      CHECK(z <= prev);
      prev = z;
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace plcc
