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

#include "plcc/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "plcc/formulas.hpp"
#include "plcc/summation.hpp"

namespace plcc {

int ContestConfig::slot_of(int i) const {
  if (participants[0] == i) return 0;
  if (participants[1] == i) return 1;
  throw StructuralError("contestant " + std::to_string(i) +
                        " is not a participant of contest " + id);
}

std::vector<int> DesignerProfile::contests_of(int j) const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(contests.size()); ++k) {
    if (contests[k].designer == j) out.push_back(k);
  }
  return out;
}

const ContestConfig* DesignerProfile::find(const std::string& id) const {
  for (const ContestConfig& c : contests) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<std::vector<int>> incidence(int num_contestants,
                                        const ContestList& contests) {
  std::vector<std::vector<int>> out(num_contestants);
  for (int k = 0; k < static_cast<int>(contests.size()); ++k) {
    for (int i : contests[k].participants) {
      if (i < 0 || i >= num_contestants) {
        throw StructuralError("contest " + contests[k].id +
                              " references an unknown contestant");
      }
      out[i].push_back(k);
    }
  }
  return out;
}

void EffortProfile::set(int i, const std::string& contest, double x) {
  if (!(x >= 0.0)) throw DomainError("efforts must be nonnegative");
  entries_[EffortKey{i, contest}] = x;
}

double EffortProfile::at(int i, const std::string& contest) const {
  auto it = entries_.find(EffortKey{i, contest});
  if (it == entries_.end()) {
    throw StructuralError("no effort for contestant " + std::to_string(i) +
                          " in contest " + contest);
  }
  return it->second;
}

std::optional<double> EffortProfile::get(int i,
                                         const std::string& contest) const {
  auto it = entries_.find(EffortKey{i, contest});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double EffortProfile::total(int i) const {
  CompensatedSum<double> acc;
  for (const auto& [key, x] : entries_) {
    if (key.contestant == i) acc += x;
  }
  return acc.value();
}

double csf_f(double x, double y) { return lottery(x, y); }

ProbabilityMap winning_probabilities(const DesignerProfile& profile,
                                     const EffortProfile& x) {
  ProbabilityMap out;
  for (const ContestConfig& c : profile.contests) {
    const int a = c.participants[0];
    const int b = c.participants[1];
    const double ya = c.biases[0] * x.at(a, c.id);
    const double yb = c.biases[1] * x.at(b, c.id);
    const double pa = csf_f(ya, yb);
    out[EffortKey{a, c.id}] = pa;
    out[EffortKey{b, c.id}] = csf_f(yb, ya);
  }
  return out;
}

Utilities utilities(const Instance& instance, const DesignerProfile& profile,
                    const EffortProfile& x) {
  const int n = instance.num_contestants();
  const int m = instance.num_designers();
  std::vector<CompensatedSum<double>> cu(n), du(m);
  const ProbabilityMap p = winning_probabilities(profile, x);
  for (const ContestConfig& c : profile.contests) {
    if (c.designer < 0 || c.designer >= m) {
      throw StructuralError("contest " + c.id + " has an unknown designer");
    }
    for (int i : c.participants) {
      if (i < 0 || i >= n) {
        throw StructuralError("contest " + c.id +
                              " references an unknown contestant");
      }
      cu[i] += c.reward * p.at(EffortKey{i, c.id});
      du[c.designer] += x.at(i, c.id);
    }
  }
  Utilities u{Vector(n), Vector(m)};
  for (int i = 0; i < n; ++i) u.contestants[i] = cu[i].value();
  for (int j = 0; j < m; ++j) u.designers[j] = du[j].value();
  return u;
}

std::vector<std::string> validate_instance(const Instance& instance) {
  std::vector<std::string> v;
  if (instance.num_contestants() < 2) v.push_back("n >= 2 required");
  if (instance.num_designers() < 1) v.push_back("m >= 1 required");
  for (int i = 0; i < instance.num_contestants(); ++i) {
    if (!(instance.efforts[i] > 0.0) || !std::isfinite(instance.efforts[i])) {
      v.push_back("effort T_" + std::to_string(i) + " must be positive");
    }
  }
  for (int j = 0; j < instance.num_designers(); ++j) {
    if (!(instance.budgets[j] > 0.0) || !std::isfinite(instance.budgets[j])) {
      v.push_back("budget B_" + std::to_string(j) + " must be positive");
    }
  }
  return v;
}

std::vector<std::string> validate_contests(int num_contestants,
                                           const ContestList& contests) {
  std::vector<std::string> v;
  std::set<std::string> ids;
  for (const ContestConfig& c : contests) {
    if (!ids.insert(c.id).second) v.push_back("duplicate contest id " + c.id);
    for (int i : c.participants) {
      if (i < 0 || i >= num_contestants) {
        v.push_back("contest " + c.id + ": participant index out of range");
      }
    }
    if (c.participants[0] == c.participants[1]) {
      v.push_back("contest " + c.id + ": participants must be distinct");
    }
    if (!(c.reward > 0.0) || !std::isfinite(c.reward)) {
      v.push_back("contest " + c.id + ": reward must be positive");
    }
    for (double a : c.biases) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        v.push_back("contest " + c.id + ": biases must be positive");
        break;
      }
    }
  }
  return v;
}

std::vector<std::string> validate_profile(const Instance& instance,
                                          const DesignerProfile& profile,
                                          PrizeModel mode) {
  const int m = instance.num_designers();
  std::vector<std::string> v =
      validate_contests(instance.num_contestants(), profile.contests);
  std::vector<CompensatedSum<double>> spent(m);
  std::vector<int> count(m, 0);
  for (const ContestConfig& c : profile.contests) {
    if (c.designer < 0 || c.designer >= m) {
      v.push_back("contest " + c.id + ": designer index out of range");
    } else {
      spent[c.designer] += c.reward;
      ++count[c.designer];
    }
  }
  for (int j = 0; j < m; ++j) {
    // Constructed rewards are products of ratios; allow rounding only.
    if (spent[j].value() > instance.budgets[j] * (1.0 + 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "budget exceeded for designer " << j << ": " << spent[j].value()
         << " > " << instance.budgets[j];
      v.push_back(os.str());
    }
    if (mode == PrizeModel::kIndivisible && count[j] != 1) {
      v.push_back("one contest per designer required (designer " +
                  std::to_string(j) + " has " + std::to_string(count[j]) +
                  ")");
    }
  }
  return v;
}

}  // namespace plcc
