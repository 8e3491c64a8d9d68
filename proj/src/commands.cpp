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

#include "plcc/commands.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "plcc/dpm.hpp"
#include "plcc/fixtures.hpp"
#include "plcc/ipm.hpp"
#include "plcc/oracle.hpp"
#include "plcc/random.hpp"

namespace plcc::cli {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const std::string& x : v) s += (s.empty() ? "" : "; ") + x;
  return s;
}

ReportFile trace_only_report(const InstanceFile& file, const SolverTrace& t,
                             double epsilon) {
  ReportFile r;
  r.kind = "solve";
  r.contestants = file.contestant_ids;
  r.designers = file.designer_ids;
  r.lambda.assign(t.lambda.data(), t.lambda.data() + t.lambda.size());
  ReportSolver s;
  s.epsilon = epsilon;
  s.step_mode = to_string(t.step_mode);
  s.iterations = t.iterations;
  s.final_residual = t.residual_history.empty() ? 0.0 : t.residual_history.back();
  s.converged = t.converged;
  s.residual_history = t.residual_history;
  r.solver = s;
  return r;
}

}  // namespace

void parse_step_mode(const std::string& text, SolverConfig* config) {
  if (text == "adaptive") {
    config->step_mode = StepMode::kAdaptive;
  } else if (text == "guaranteed") {
    config->step_mode = StepMode::kGuaranteed;
  } else if (text.rfind("fixed:", 0) == 0) {
    size_t used = 0;
    const std::string num = text.substr(6);
    double gamma = 0.0;
    try {
      gamma = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || used == 0 || !(gamma > 0.0)) {
      throw std::invalid_argument("fixed step needs a positive number: " + text);
    }
    config->step_mode = StepMode::kFixed;
    config->fixed_step = gamma;
  } else {
    throw std::invalid_argument("unknown step mode " + text);
  }
}

CommandResult cmd_solve(const InstanceFile& file, const SolverConfig& config) {
  CommandResult res;
  SolverTrace trace;
  try {
    trace = solve_emv(file.instance, file.profile.contests, config);
  } catch (const NonConvergenceError& e) {
    res.exit_code = kNonConvergence;
    res.message = e.what();
    res.report = trace_only_report(file, e.trace(), config.epsilon);
    return res;
  }
  const EffortProfile x =
      reconstruct_equilibrium(file.instance, trace.lambda, file.profile.contests,
                              1.0 + trace.epsilon_prime);
  const EpsilonReport eq = verify_epsilon_equilibrium(
      file.instance, file.profile, x, config.epsilon);
  res.report = equilibrium_report("solve", file, trace.lambda, x, &trace,
                                  config.epsilon);
  const EmvCheck cert = check_emv(file.instance, file.profile.contests,
                                  trace.lambda, trace.epsilon_prime,
                                  trace.a_vector);
  res.report.checks.push_back(
      {"regularized multiplier conditions", cert.certified,
       join(cert.violations)});
  res.report.checks.push_back(
      {"epsilon equilibrium", eq.pass,
       "min ratio " + fmt(eq.min_ratio) + " " + join(eq.violations)});
  res.report.values.push_back({"min_ratio", eq.min_ratio});
  for (const std::string& d : trace.diagnostics) {
    res.report.checks.push_back({"diagnostic", true, d});
  }
  res.exit_code = eq.pass ? kVerified : kMismatch;
  res.message = eq.pass ? "verified" : "epsilon-equilibrium check failed";
  return res;
}

CommandResult cmd_build(const InstanceFile& file, const std::string& construct,
                        const std::vector<double>& bias_grid,
                        InstanceFile* profile) {
  CommandResult res;
  InstanceFile built = file;
  if (construct == "wde") {
    const WdeReport w = build_wde(file.instance, bias_grid);
    built.profile = w.profile;
    built.mode = PrizeModel::kIndivisible;
    res.report = equilibrium_report("wde", built, w.lambda, w.efforts);
    res.report.checks.push_back({"multiplier conditions", w.emv.certified,
                                 join(w.emv.violations)});
    res.report.checks.push_back({"balanced probabilities", w.balanced, ""});
    res.report.checks.push_back(
        {"congestion equilibrium", w.pne.certified && w.pne.potential_increasing,
         std::to_string(w.pne.steps.size()) + " improvement steps " +
             join(w.pne.violations)});
    for (int j = 0; j < w.formula_utilities.size(); ++j) {
      res.report.values.push_back({"designer " + built.designer_ids[j] +
                                       " congestion utility",
                                   w.formula_utilities[j]});
    }
    if (!w.deviation_checks.empty()) {
      res.report.checks.push_back({"bias deviation spot check",
                                   w.max_improvement <= 1e-9,
                                   "max relative gain " +
                                       fmt(w.max_improvement)});
    }
    res.exit_code = w.certified ? kVerified : kMismatch;
  } else if (construct == "dpm-spe") {
    const DpmReport d = build_dpm_spe(file.instance);
    built.profile = d.profile;
    built.mode = PrizeModel::kDivisible;
    res.report = equilibrium_report("dpm-spe", built, d.lambda, d.efforts);
    res.report.checks.push_back({"multiplier conditions", d.emv.certified,
                                 join(d.emv.violations)});
    res.report.checks.push_back({"proportional conditions", d.conditions.pass,
                                 join(d.conditions.violations)});
    res.report.checks.push_back({"construction", d.certified,
                                 join(d.violations)});
    for (const MatchingEntry& e : d.matching.entries) {
      res.report.values.push_back({"matching " + built.contestant_ids[e.i] +
                                       "-" + built.contestant_ids[e.k],
                                   e.amount});
    }
    res.exit_code = d.certified ? kVerified : kMismatch;
  } else {
    throw std::invalid_argument("unknown construction " + construct);
  }
  res.message = res.exit_code == kVerified ? "certified" : "certification failed";
  if (profile) *profile = built;
  return res;
}

CommandResult cmd_verify(const InstanceFile& file, const ReportFile& report,
                         double epsilon) {
  CommandResult res;
  if (report.contestants != file.contestant_ids ||
      report.lambda.size() != file.contestant_ids.size()) {
    throw ValidationError("report does not match the instance contestants");
  }
  std::map<std::string, int> index;
  for (size_t i = 0; i < file.contestant_ids.size(); ++i) {
    index[file.contestant_ids[i]] = static_cast<int>(i);
  }
  Vector lambda = Eigen::Map<const Vector>(report.lambda.data(),
                                           report.lambda.size());
  EffortProfile x;
  for (const ReportEffort& e : report.efforts) {
    auto it = index.find(e.contestant);
    if (it == index.end()) {
      throw ValidationError("report names unknown contestant " + e.contestant);
    }
    x.set(it->second, e.contest, e.effort);
  }
  for (const ContestConfig& c : file.profile.contests) {
    for (int i : c.participants) {
      if (!x.get(i, c.id)) {
        throw ValidationError("report lacks effort for contest " + c.id);
      }
    }
  }
  const EmvCheck cert =
      check_emv(file.instance, file.profile.contests, lambda, epsilon);
  const EpsilonReport eq =
      verify_epsilon_equilibrium(file.instance, file.profile, x, epsilon);
  res.report = report;
  res.report.kind = "verify";
  res.report.checks.clear();
  res.report.values.clear();
  res.report.checks.push_back(
      {"multiplier conditions", cert.certified, join(cert.violations)});
  res.report.checks.push_back(
      {"epsilon equilibrium", eq.pass,
       "min ratio " + fmt(eq.min_ratio) + " " + join(eq.violations)});
  res.report.values.push_back({"min_ratio", eq.min_ratio});
  res.exit_code = cert.certified && eq.pass ? kVerified : kMismatch;
  res.message = res.exit_code == kVerified ? "verified" : "verification failed";
  return res;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pairwise lottery contests: equilibria and designer constructions"};
  app.require_subcommand(1);

  SolverConfig config;
  std::string step_mode = "adaptive";
  std::string init = "ones";
  std::string out_path;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--epsilon", config.epsilon, "target precision")
        ->check(CLI::PositiveNumber);
    sub->add_option("--step-mode", step_mode,
                    "adaptive, guaranteed or fixed:<gamma>");
    sub->add_option("--max-iters", config.max_iterations, "iteration limit")
        ->check(CLI::PositiveNumber);
    sub->add_option("--init", init, "ones or scale")
        ->check(CLI::IsMember({"ones", "scale"}));
  };

  std::string instance_path, report_path, construct, mode, repro_case;
  std::string designer_id, pairs_text;
  std::vector<double> bias_grid, prize_levels;
  std::string profile_out;
  unsigned long long seed = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve the contestant stage");
  solve->add_option("instance", instance_path)->required();
  add_solver_flags(solve);
  solve->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* build = app.add_subcommand("build", "construct a designer equilibrium");
  build->add_option("construction", construct, "wde or dpm-spe")
      ->check(CLI::IsMember({"wde", "dpm-spe"}));
  build->add_option("instance", instance_path)->required();
  build->add_option("--mode", mode, "ipm (wde) or dpm (dpm-spe)")
      ->check(CLI::IsMember({"ipm", "dpm"}));
  build->add_option("--bias-grid", bias_grid,
                    "bias factors for the deviation spot check");
  build->add_option("--profile-out", profile_out,
                    "write the constructed instance file here");
  build->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* repro = app.add_subcommand("repro", "run an embedded reproduction");
  repro->add_option("case", repro_case, "thm4.1, thm4.4 or thm5.1")
      ->required()
      ->check(CLI::IsMember({"thm4.1", "thm4.4", "thm5.1"}));
  repro->add_option("--out", out_path, "report path");

  CLI::App* verify = app.add_subcommand("verify", "re-certify a report");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("report", report_path)->required();
  verify->add_option("--epsilon", config.epsilon, "tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", out_path, "report path");

  CLI::App* deviate =
      app.add_subcommand("deviate", "search designer deviations on a grid");
  deviate->add_option("instance", instance_path)->required();
  deviate->add_option("--designer", designer_id, "designer id")->required();
  deviate->add_option("--bias-factors", bias_grid, "bias factor grid");
  deviate->add_option("--prize-levels", prize_levels, "prize grid");
  deviate->add_option("--pairs", pairs_text,
                      "participant pairs as id,id;id,id (indivisible model)");
  add_solver_flags(deviate);
  deviate->add_option("--out", out_path, "audit CSV path (default stdout)");

  CLI::App* plot =
      app.add_subcommand("emit-plotdata", "write CSV plot data for a report");
  plot->add_option("report", report_path)->required();
  plot->add_option("--out", out_path, "output directory")->required();

  CLI::App* generate = app.add_subcommand("generate", "write a random instance");
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--mode", mode, "ipm or dpm")
      ->check(CLI::IsMember({"ipm", "dpm"}));
  generate->add_option("--out", out_path, "instance path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kVerified : kUsage;
  }

  try {
    parse_step_mode(step_mode, &config);
    config.init_mode = init == "scale" ? InitMode::kScaleAware : InitMode::kOnes;

    if (*solve) {
      const InstanceFile file = parse_instance(read_file(instance_path));
      const CommandResult r = cmd_solve(file, config);
      emit(emit_report(r.report), out_path, out);
      if (r.exit_code == kNonConvergence) {
        err << "non-convergence: " << r.message << "\n";
        const auto& h = r.report.solver->residual_history;
        const size_t from = h.size() > 10 ? h.size() - 10 : 0;
        for (size_t t = from; t < h.size(); ++t) {
          err << "  iteration " << t << " residual " << fmt(h[t]) << "\n";
        }
      } else {
        err << r.message << "\n";
      }
      return r.exit_code;
    }
    if (*build) {
      const InstanceFile file = parse_instance(read_file(instance_path));
      if (construct.empty()) {
        if (!mode.empty()) {
          construct = mode == "ipm" ? "wde" : "dpm-spe";
        } else {
          construct =
              file.mode == PrizeModel::kIndivisible ? "wde" : "dpm-spe";
        }
      }
      InstanceFile built;
      const CommandResult r = cmd_build(file, construct, bias_grid, &built);
      emit(emit_report(r.report), out_path, out);
      if (!profile_out.empty()) write_file(profile_out, emit_instance(built));
      err << r.message << "\n";
      return r.exit_code;
    }
    if (*repro) {
      const ReproResult r = run_repro(repro_case);
      out << diff_table(r);
      if (!out_path.empty()) write_file(out_path, emit_report(r.report));
      return r.passed() ? kVerified : kMismatch;
    }
    if (*verify) {
      const InstanceFile file = parse_instance(read_file(instance_path));
      const ReportFile report = parse_report(read_file(report_path));
      const CommandResult r = cmd_verify(file, report, config.epsilon);
      emit(emit_report(r.report), out_path, out);
      err << r.message << "\n";
      return r.exit_code;
    }
    if (*deviate) {
      const InstanceFile file = parse_instance(read_file(instance_path));
      int j = -1;
      for (size_t k = 0; k < file.designer_ids.size(); ++k) {
        if (file.designer_ids[k] == designer_id) j = static_cast<int>(k);
      }
      if (j < 0) throw ValidationError("unknown designer " + designer_id);
      DeviationGrid grid;
      grid.bias_factors = bias_grid;
      grid.prize_levels = prize_levels;
      std::stringstream ps(pairs_text);
      std::string item;
      while (std::getline(ps, item, ';')) {
        const size_t comma = item.find(',');
        if (comma == std::string::npos) {
          throw std::invalid_argument("pairs look like id,id;id,id");
        }
        std::array<int, 2> pair{-1, -1};
        const std::string ids[2] = {item.substr(0, comma),
                                    item.substr(comma + 1)};
        for (int s = 0; s < 2; ++s) {
          for (size_t k = 0; k < file.contestant_ids.size(); ++k) {
            if (file.contestant_ids[k] == ids[s]) pair[s] = static_cast<int>(k);
          }
          if (pair[s] < 0) throw ValidationError("unknown contestant " + ids[s]);
        }
        grid.participant_pairs.push_back(pair);
      }
      const DeviationSearchResult r = designer_deviation_search(
          file.instance, file.profile, j, grid, file.mode, config);
      emit(audit_csv(r), out_path, out);
      err << "baseline utility " << fmt(r.baseline_utility) << "\n";
      if (r.best) {
        err << "best candidate " << r.best->label << " utility "
            << fmt(r.best_utility) << "\n";
      }
      return kVerified;
    }
    if (*plot) {
      const ReportFile report = parse_report(read_file(report_path));
      std::filesystem::create_directories(out_path);
      const std::filesystem::path dir(out_path);
      write_file((dir / "residuals.csv").string(), residual_csv(report));
      write_file((dir / "efforts.csv").string(), effort_csv(report));
      write_file((dir / "utilities.csv").string(), utility_csv(report));
      return kVerified;
    }
    if (*generate) {
      std::mt19937_64 rng(seed);
      RandomCaseOptions opt;
      opt.mode = mode == "ipm" ? PrizeModel::kIndivisible : PrizeModel::kDivisible;
      // Keep divisible instances inside the proportional construction's domain.
      opt.require_no_dominant = opt.mode == PrizeModel::kDivisible;
      const RandomCase rc = random_case(rng, opt);
      emit(emit_instance(make_instance_file(rc.instance, rc.profile, opt.mode)),
           out_path, out);
      return kVerified;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // PreconditionError derives from std::invalid_argument.
    if (dynamic_cast<const PreconditionError*>(&e)) {
      err << "precondition failed: " << e.what() << "\n";
      return kValidation;
    }
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const NonConvergenceError& e) {
    err << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

}  // namespace plcc::cli
