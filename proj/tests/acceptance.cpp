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

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plcc/commands.hpp"
#include "plcc/dpm.hpp"
#include "plcc/fixtures.hpp"
#include "plcc/ipm.hpp"
#include "plcc/oracle.hpp"
#include "plcc/random.hpp"

namespace {

using namespace plcc;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are reported.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::string d = summary;
    if (failures_ > 0) {
      d += " | " + std::to_string(failures_) + " failure(s): " + notes_;
    }
    return {failures_ == 0, d};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Outcome repro(const std::string& name) {
  const ReproResult r = run_repro(name);
  Tally t;
  for (const GoldenCheck& c : r.checks) {
    t.require(c.passed(), c.name + " = " + num(c.actual));
  }
  return t.outcome(std::to_string(r.checks.size()) + " golden values");
}

// The shared random family of criteria 4 and 5.
std::vector<RandomCase> solve_family() {
  std::mt19937_64 rng(20260401);
  RandomCaseOptions opt;
  opt.max_contestants = 5;
  opt.max_designers = 4;
  opt.max_contests = 8;
  opt.low = 1e-2;
  opt.high = 1e2;
  std::vector<RandomCase> out;
  for (int k = 0; k < 50; ++k) {
    opt.mode = k % 2 ? PrizeModel::kIndivisible : PrizeModel::kDivisible;
    out.push_back(random_case(rng, opt));
  }
  return out;
}

Outcome epsilon_guarantee() {
  constexpr double kEps = 1e-3;
  Tally t;
  double worst = 1.0;
  int k = 0;
  for (const RandomCase& rc : solve_family()) {
    const PrizeModel mode =
        k % 2 ? PrizeModel::kIndivisible : PrizeModel::kDivisible;
    const InstanceFile f = make_instance_file(rc.instance, rc.profile, mode);
    SolverConfig config;
    config.epsilon = kEps;
    const cli::CommandResult r = cli::cmd_solve(f, config);
    double ratio = 0.0;
    for (const ReportValue& v : r.report.values) {
      if (v.name == "min_ratio") ratio = v.value;
    }
    worst = std::min(worst, ratio);
    t.require(r.exit_code == cli::kVerified && ratio >= 1.0 - kEps,
              "instance " + std::to_string(k) + " ratio " + num(ratio));
    ++k;
  }
  return t.outcome("50 instances, min ratio " + num(worst));
}

Outcome uniqueness() {
  Tally t;
  double worst = 0.0;
  int k = 0;
  for (const RandomCase& rc : solve_family()) {
    SolverConfig ones;
    ones.epsilon = 1e-3;
    SolverConfig scale = ones;
    scale.init_mode = InitMode::kScaleAware;
    const SolverTrace a = solve_emv(rc.instance, rc.profile.contests, ones);
    const SolverTrace b = solve_emv(rc.instance, rc.profile.contests, scale);
    const double tol = 10.0 * a.epsilon_prime;
    for (int i = 0; i < a.lambda.size(); ++i) {
      const double d = a.lambda[i] == 0.0
                           ? (b.lambda[i] == 0.0 ? 0.0 : 1.0)
                           : std::abs(a.lambda[i] - b.lambda[i]) / a.lambda[i];
      worst = std::max(worst, d);
      t.require(d <= tol, "instance " + std::to_string(k) + " contestant " +
                              std::to_string(i) + " differs by " + num(d));
    }
    ++k;
  }
  return t.outcome("50 instances, max relative gap " + num(worst) +
                   " (limit 10*eps' = 2.5e-3)");
}

Outcome monotonicity() {
  Tally t;
  std::mt19937_64 rng(606);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    const RandomCase rc = random_case(rng, {});
    const ContestList& cs = rc.profile.contests;
    const int n = rc.instance.num_contestants();
    Vector l(n), m(n);
    for (int i = 0; i < n; ++i) {
      l[i] = log_uniform(rng, 1e-3, 1e3);
      m[i] = log_uniform(rng, 1e-3, 1e3);
    }
    const double probe = monotonicity_probe(rc.instance, cs, l, m);
    const double scale = ((m - l).cwiseAbs().array() *
                          (hat_T_all(l, cs) + hat_T_all(m, cs)).array())
                             .sum();
    worst = std::max(worst, probe / scale);
    t.require(probe <= 1e-12 * scale, "pair " + std::to_string(k));

    if (k % 10 != 0) continue;
    const Matrix J = demand_jacobian(rc.instance, cs, l);
    const Vector demand = hat_T_all(l, cs);
    for (int i = 0; i < n; ++i) {
      t.require(J(i, i) <= 0.0, "positive diagonal");
      for (int c = 0; c < n; ++c) {
        if (i != c) t.require(J(i, c) == -J(c, i), "antisymmetry");
      }
    }
    for (int c = 0; c < n; ++c) {
      const double h = 1e-6 * l[c];
      Vector up = l, down = l;
      up[c] += h;
      down[c] -= h;
      const Vector fd = (hat_T_all(up, cs) - hat_T_all(down, cs)) / (2 * h);
      for (int i = 0; i < n; ++i) {
        // Central differences carry about 1e-10·T̂_i/λ_c of rounding noise.
        const double noise = 1e-9 * demand[i] / l[c];
        t.require(std::abs(fd[i] - J(i, c)) <=
                      1e-5 * std::max(std::abs(J(i, c)), std::abs(fd[i])) +
                          noise,
                  "finite difference");
      }
    }
  }
  return t.outcome("1000 pairs, max probe/scale " + num(worst) +
                   "; jacobian on 100 points");
}

Outcome wde_construction() {
  Tally t;
  std::mt19937_64 rng(707);
  std::vector<double> grid;
  for (int k = -10; k <= 10; ++k) grid.push_back(std::pow(1.25, k));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::uniform_int_distribution<int> nd(2, 6), md(1, 4);
    const int n = nd(rng);
    const int m = md(rng);
    Instance inst{Vector(n), Vector(m)};
    for (int i = 0; i < n; ++i) inst.efforts[i] = log_uniform(rng, 1e-2, 1e2);
    for (int j = 0; j < m; ++j) inst.budgets[j] = log_uniform(rng, 1e-2, 1e2);
    const WdeReport w = build_wde(inst, grid);
    worst = std::max(worst, w.max_improvement);
    const std::string tag = "instance " + std::to_string(k);
    t.require(w.pne.violations.empty() || w.pne.certified, tag + " did not terminate");
    t.require(w.pne.potential_increasing, tag + " potential not increasing");
    t.require(w.pne.certified, tag + " not a PNE");
    t.require(w.max_improvement <= 1e-9, tag + " improvement " + num(w.max_improvement));
    t.require(w.certified, tag + " not certified");
  }
  return t.outcome("20 instances, 21-point grid, max improvement " + num(worst));
}

Outcome dpm_construction() {
  Tally t;
  std::mt19937_64 rng(808);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::uniform_int_distribution<int> nd(2, 6), md(1, 4);
    const int n = nd(rng);
    const int m = md(rng);
    Instance inst{Vector(n), Vector(m)};
    do {
      for (int i = 0; i < n; ++i) inst.efforts[i] = log_uniform(rng, 1e-2, 1e2);
      if (n == 2) inst.efforts[1] = inst.efforts[0];
    } while (inst.efforts.maxCoeff() > 0.5 * inst.efforts.sum());
    for (int j = 0; j < m; ++j) inst.budgets[j] = log_uniform(rng, 1e-2, 1e2);
    const DpmReport r = build_dpm_spe(inst);
    const std::string tag = "instance " + std::to_string(k);
    const ProportionalCheck c = verify_proportional_conditions(inst, r.profile, 1e-12);
    t.require(c.pass, tag + " proportional conditions");
    for (int j = 0; j < m; ++j) {
      const double e = std::abs(r.achieved.designers[j] - r.closed_form.designers[j]) /
                       r.closed_form.designers[j];
      worst = std::max(worst, e);
      t.require(e <= 1e-10, tag + " designer utility");
      t.require(std::abs(r.budget_spent[j] - inst.budgets[j]) <=
                    2 * std::numeric_limits<double>::epsilon() * inst.budgets[j],
                tag + " budget not exhausted");
    }
    for (int i = 0; i < n; ++i) {
      const double e =
          std::abs(r.achieved.contestants[i] - r.closed_form.contestants[i]) /
          r.closed_form.contestants[i];
      worst = std::max(worst, e);
      t.require(e <= 1e-10, tag + " contestant utility");
    }
  }
  return t.outcome("20 instances, max utility error " + num(worst));
}

Outcome oracle_soundness() {
  Tally t;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_kkt = 0.0;
  for (int k = 0; k < 25; ++k) {
    std::uniform_int_distribution<int> nd(2, 4), cd(1, 5);
    const int n = nd(rng);
    const int contests = cd(rng);
    Instance inst{Vector(n), Vector::Ones(1)};
    for (int i = 0; i < n; ++i) inst.efforts[i] = log_uniform(rng, 1e-2, 1e2);
    std::uniform_int_distribution<int> od(1, n - 1);
    ContestList cs;
    std::map<std::string, double> opp;
    for (int c = 0; c < contests; ++c) {
      cs.push_back({"C" + std::to_string(c), 0, {0, od(rng)},
                    log_uniform(rng, 1e-2, 1e2),
                    {log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2)}});
      opp[cs.back().id] = log_uniform(rng, 1e-2, 1e2);
    }
    const std::string tag = "problem " + std::to_string(k);
    const BestResponseResult br = best_response(inst, cs, 0, opp);
    if (!br.effort) {
      t.require(false, tag + " not attained");
      continue;
    }
    auto value = [&](const std::vector<double>& x) {
      double v = 0.0;
      for (size_t c = 0; c < cs.size(); ++c) {
        const double s = cs[c].biases[0] * x[c];
        const double y = cs[c].biases[1] * opp[cs[c].id];
        v += cs[c].reward * s / (s + y);
      }
      return v;
    };
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> w(cs.size());
      double sum = 0.0;
      for (double& v : w) sum += v = -std::log(1.0 - u(rng));
      const double scale = inst.efforts[0] * u(rng) / sum;
      for (double& v : w) v *= scale;
      t.require(value(w) <= br.sup_value * (1 + 1e-12), tag + " beaten by grid");
    }
    double mu = 0.0;
    std::vector<double> marginal;
    for (const ContestConfig& c : cs) {
      const double x = br.effort->at(c.id);
      const double y = c.biases[1] * opp[c.id];
      const double d = c.biases[0] * x + y;
      marginal.push_back(c.reward * c.biases[0] * y / (d * d));
      if (x > 0) mu = std::max(mu, marginal.back());
    }
    for (size_t c = 0; c < cs.size(); ++c) {
      const double x = br.effort->at(cs[c].id);
      if (x > 0) {
        const double gap = std::abs(marginal[c] - mu) / mu;
        worst_kkt = std::max(worst_kkt, gap);
        t.require(gap <= 1e-8, tag + " unequal marginals");
      } else {
        t.require(marginal[c] <= mu * (1 + 1e-8), tag + " idle contest pays more");
      }
    }
  }
  return t.outcome("25 problems x 1e4 samples, max KKT gap " + num(worst_kkt));
}

Outcome box_invariant() {
  Tally t;
  std::mt19937_64 rng(1010);
  RandomCaseOptions opt;
  opt.max_contestants = 4;
  opt.max_contests = 5;
  opt.low = 0.5;
  opt.high = 2.0;
  long steps = 0;
  for (int k = 0; k < 10; ++k) {
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
        plcc::guaranteed_box(rc.instance, rc.profile.contests, trace.a_vector);
    const std::string tag = "instance " + std::to_string(k);
    double prev = std::numeric_limits<double>::infinity();
    for (const Vector& it : trace.iterates) {
      for (int i = 0; i < it.size(); ++i) {
        if (box.upper[i] == 0.0) continue;
        t.require(it[i] >= box.lower[i] && it[i] <= box.upper[i],
                  tag + " left the box");
      }
      const Vector z = hat_T_all(it, rc.profile.contests) +
                       (trace.a_vector.array() /
                        it.array().max(std::numeric_limits<double>::min()))
                           .matrix() -
                       rc.instance.efforts;
      double zz = 0.0;
      for (int i = 0; i < z.size(); ++i) {
        if (box.upper[i] > 0.0) zz += z[i] * z[i];
      }
      t.require(zz <= prev, tag + " sum of squares increased");
      prev = zz;
      ++steps;
    }
  }
  return t.outcome("10 instances, " + std::to_string(steps) + " iterates");
}

struct Criterion {
  int number;
  std::string name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "asymmetric-bias reproduction", 10, [] { return repro("thm4.4"); }},
      {2, "divisible-bias reproduction", 30, [] { return repro("thm5.1"); }},
      {3, "three-player reproduction", 5, [] { return repro("thm4.1"); }},
      {4, "epsilon-equilibrium guarantee", 120, epsilon_guarantee},
      {5, "uniqueness across initializations", 0, uniqueness},
      {6, "monotonicity and jacobian", 0, monotonicity},
      {7, "weak designer equilibrium construction", 0, wde_construction},
      {8, "proportional designer equilibrium construction", 0, dpm_construction},
      {9, "best-response oracle soundness", 0, oracle_soundness},
      {10, "guaranteed-step box invariant", 0, box_invariant},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += " | over time limit " + num(c.time_limit) + "s";
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << c.number << ": " << (o.pass ? "PASS" : "FAIL")
              << "  " << c.name << " (" << num(secs) << "s) " << o.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) +
                                                          " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
