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

#ifndef PLCC_SUMMATION_HPP_
#define PLCC_SUMMATION_HPP_

#include <cmath>
#include <iterator>
#include <type_traits>

namespace plcc {

// Neumaier's variant of Kahan summation.
template <typename Scalar>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Scalar init) : sum_(init) {}

  CompensatedSum& operator+=(Scalar v) {
    using std::abs;
    const Scalar t = sum_ + v;
    if (abs(sum_) >= abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  CompensatedSum& operator-=(Scalar v) { return *this += -v; }

  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_ = Scalar(0);
  Scalar comp_ = Scalar(0);
};

template <typename Range>
auto compensated_sum(const Range& values) {
  using Scalar = std::decay_t<decltype(*std::begin(values))>;
  CompensatedSum<Scalar> acc;
  for (const auto& v : values) acc += v;
  return acc.value();
}

}  // namespace plcc

#endif  // PLCC_SUMMATION_HPP_
