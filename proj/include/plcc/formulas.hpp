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

#ifndef PLCC_FORMULAS_HPP_
#define PLCC_FORMULAS_HPP_

// Closed-form kernels of the multiplier characterization. Each is written
// for a single contest seen from participant i, with the opponent's bias and
// multiplier passed explicitly; `Scalar` may be any Eigen-compatible real.

#include <vector>

#include <Eigen/Dense>

#include "plcc/model.hpp"
#include "plcc/summation.hpp"

namespace plcc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Scalar lottery(Scalar x, Scalar y) {
  if (x < Scalar(0) || y < Scalar(0)) {
    throw DomainError("contest success function needs nonnegative efforts");
  }
  const Scalar s = x + y;
  if (!(s > Scalar(0))) return Scalar(0.5);
  // The larger share is formed as a complement so f(x,y) + f(y,x) == 1.
  return x <= y ? x / s : Scalar(1) - y / s;
}

template <typename Scalar>
void require_valid_pair(Scalar lambda_i, Scalar lambda_op) {
  if (!(lambda_i + lambda_op > Scalar(0))) {
    throw InvalidMultiplierError("both multipliers of a contest are zero");
  }
}

// x̂_{i,C}(λ) = R α_i α_op λ_op / (α_op λ_i + α_i λ_op)^2
template <typename Scalar>
Scalar demand(Scalar reward, Scalar alpha_i, Scalar alpha_op, Scalar lambda_i,
              Scalar lambda_op) {
  require_valid_pair(lambda_i, lambda_op);
  const Scalar d = alpha_op * lambda_i + alpha_i * lambda_op;
  return reward * alpha_i * alpha_op * lambda_op / (d * d);
}

// p̂_{i,C}(λ) = α_i λ_op / (α_i λ_op + α_op λ_i)
template <typename Scalar>
Scalar win_probability(Scalar alpha_i, Scalar alpha_op, Scalar lambda_i,
                       Scalar lambda_op) {
  require_valid_pair(lambda_i, lambda_op);
  return alpha_i * lambda_op / (alpha_i * lambda_op + alpha_op * lambda_i);
}

template <typename Scalar>
struct DemandPartials {
  Scalar own;       // ∂x̂_{i,C}/∂λ_i
  Scalar opponent;  // ∂x̂_{i,C}/∂λ_op
};

// With u = λ_i/α_i and w = λ_op/α_op, x̂ = R w / (α_i (u + w)^2).
template <typename Scalar>
DemandPartials<Scalar> demand_partials(Scalar reward, Scalar alpha_i,
                                       Scalar alpha_op, Scalar lambda_i,
                                       Scalar lambda_op) {
  require_valid_pair(lambda_i, lambda_op);
  const Scalar u = lambda_i / alpha_i;
  const Scalar w = lambda_op / alpha_op;
  const Scalar s = u + w;
  const Scalar s3 = s * s * s;
  return {-Scalar(2) * reward * w / (alpha_i * alpha_i * s3),
          reward * (u - w) / (alpha_i * alpha_op * s3)};
}

// T̂(λ) for every contestant; lambda.size() fixes n.
template <typename Scalar>
VectorX<Scalar> demand_totals(const ContestList& contests,
                              const VectorX<Scalar>& lambda) {
  const Eigen::Index n = lambda.size();
  std::vector<CompensatedSum<Scalar>> acc(static_cast<size_t>(n));
  for (const ContestConfig& c : contests) {
    const int a = c.participants[0];
    const int b = c.participants[1];
    const Scalar r(c.reward), al(c.biases[0]), bl(c.biases[1]);
    acc[a] += demand<Scalar>(r, al, bl, lambda[a], lambda[b]);
    acc[b] += demand<Scalar>(r, bl, al, lambda[b], lambda[a]);
  }
  VectorX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = acc[i].value();
  return out;
}

// J_{ik} = ∂T̂_i/∂λ_k.
template <typename Scalar>
MatrixX<Scalar> demand_jacobian_kernel(const ContestList& contests,
                                       const VectorX<Scalar>& lambda) {
  const Eigen::Index n = lambda.size();
  MatrixX<Scalar> jac = MatrixX<Scalar>::Zero(n, n);
  for (const ContestConfig& c : contests) {
    const int a = c.participants[0];
    const int b = c.participants[1];
    const Scalar r(c.reward), al(c.biases[0]), bl(c.biases[1]);
    const auto pa = demand_partials<Scalar>(r, al, bl, lambda[a], lambda[b]);
    const auto pb = demand_partials<Scalar>(r, bl, al, lambda[b], lambda[a]);
    jac(a, a) += pa.own;
    jac(a, b) += pa.opponent;
    jac(b, b) += pb.own;
    jac(b, a) += pb.opponent;
  }
  return jac;
}

}  // namespace plcc

#endif  // PLCC_FORMULAS_HPP_
