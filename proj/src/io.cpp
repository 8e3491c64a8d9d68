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

#include "plcc/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace plcc {
namespace {

using nlohmann::json;

bool same(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

std::string id_of(const json& j, const std::string& what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  throw ParseError(what + ": ids must be strings or integers");
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing key '" + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

bool InstanceFile::operator==(const InstanceFile& o) const {
  return contestant_ids == o.contestant_ids &&
         designer_ids == o.designer_ids &&
         same(instance.efforts, o.instance.efforts) &&
         same(instance.budgets, o.instance.budgets) && profile == o.profile &&
         mode == o.mode;
}

InstanceFile make_instance_file(const Instance& instance,
                                const DesignerProfile& profile,
                                PrizeModel mode) {
  InstanceFile f;
  for (int i = 0; i < instance.num_contestants(); ++i) {
    f.contestant_ids.push_back(std::to_string(i + 1));
  }
  for (int j = 0; j < instance.num_designers(); ++j) {
    f.designer_ids.push_back(std::to_string(j + 1));
  }
  f.instance = instance;
  f.profile = profile;
  f.mode = mode;
  return f;
}

InstanceFile parse_instance(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  InstanceFile f;
  try {
    const std::string mode = field(doc, "mode", "instance").get<std::string>();
    if (mode == "ipm") {
      f.mode = PrizeModel::kIndivisible;
    } else if (mode == "dpm") {
      f.mode = PrizeModel::kDivisible;
    } else {
      throw ParseError("mode must be \"ipm\" or \"dpm\"");
    }
    std::map<std::string, int> contestant_index, designer_index;
    std::vector<double> efforts, budgets;
    for (const json& c : field(doc, "contestants", "instance")) {
      const std::string id = id_of(field(c, "id", "contestant"), "contestant");
      if (!contestant_index.emplace(id, f.contestant_ids.size()).second) {
        throw ValidationError("duplicate contestant id " + id);
      }
      f.contestant_ids.push_back(id);
      efforts.push_back(number(field(c, "effort", "contestant " + id),
                               "contestant " + id));
    }
    for (const json& d : field(doc, "designers", "instance")) {
      const std::string id = id_of(field(d, "id", "designer"), "designer");
      if (!designer_index.emplace(id, f.designer_ids.size()).second) {
        throw ValidationError("duplicate designer id " + id);
      }
      f.designer_ids.push_back(id);
      budgets.push_back(
          number(field(d, "budget", "designer " + id), "designer " + id));
    }
    f.instance.efforts = Eigen::Map<Vector>(efforts.data(), efforts.size());
    f.instance.budgets = Eigen::Map<Vector>(budgets.data(), budgets.size());

    for (const json& c : field(doc, "contests", "instance")) {
      ContestConfig cc;
      cc.id = id_of(field(c, "id", "contest"), "contest");
      const std::string where = "contest " + cc.id;
      const std::string designer =
          id_of(field(c, "designer", where), where + " designer");
      auto dj = designer_index.find(designer);
      if (dj == designer_index.end()) {
        throw ValidationError(where + ": unknown designer " + designer);
      }
      cc.designer = dj->second;
      const json& parts = field(c, "participants", where);
      if (!parts.is_array() || parts.size() != 2) {
        throw ParseError(where + ": participants must be a list of two ids");
      }
      std::array<std::string, 2> pid;
      for (int s = 0; s < 2; ++s) {
        pid[s] = id_of(parts[s], where + " participant");
        auto it = contestant_index.find(pid[s]);
        if (it == contestant_index.end()) {
          throw ValidationError(where + ": unknown contestant " + pid[s]);
        }
        cc.participants[s] = it->second;
      }
      cc.reward = number(field(c, "reward", where), where + " reward");
      const json& biases = field(c, "biases", where);
      if (!biases.is_object()) {
        throw ParseError(where + ": biases must map participant ids to values");
      }
      if (pid[0] == pid[1]) {
        throw ValidationError(where + ": participants must be distinct");
      }
      if (biases.size() != 2) {
        throw ValidationError(where + ": biases need exactly both participants");
      }
      for (int s = 0; s < 2; ++s) {
        if (!biases.contains(pid[s])) {
          throw ValidationError(where + ": no bias for participant " + pid[s]);
        }
        cc.biases[s] = number(biases.at(pid[s]), where + " bias");
      }
      f.profile.contests.push_back(cc);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }

  std::vector<std::string> problems = validate_instance(f.instance);
  if (problems.empty()) {
    problems = validate_profile(f.instance, f.profile, f.mode);
  }
  if (!problems.empty()) {
    std::string msg = "invalid instance:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  return f;
}

std::string emit_instance(const InstanceFile& f) {
  json doc;
  doc["mode"] = f.mode == PrizeModel::kIndivisible ? "ipm" : "dpm";
  doc["contestants"] = json::array();
  for (size_t i = 0; i < f.contestant_ids.size(); ++i) {
    doc["contestants"].push_back(
        {{"id", f.contestant_ids[i]},
         {"effort", f.instance.efforts[static_cast<int>(i)]}});
  }
  doc["designers"] = json::array();
  for (size_t j = 0; j < f.designer_ids.size(); ++j) {
    doc["designers"].push_back(
        {{"id", f.designer_ids[j]},
         {"budget", f.instance.budgets[static_cast<int>(j)]}});
  }
  doc["contests"] = json::array();
  for (const ContestConfig& c : f.profile.contests) {
    const std::string a = f.contestant_ids.at(c.participants[0]);
    const std::string b = f.contestant_ids.at(c.participants[1]);
    doc["contests"].push_back({{"id", c.id},
                               {"designer", f.designer_ids.at(c.designer)},
                               {"participants", {a, b}},
                               {"reward", c.reward},
                               {"biases", {{a, c.biases[0]}, {b, c.biases[1]}}}});
  }
  return doc.dump(2) + "\n";
}

bool ReportFile::all_checks_pass() const {
  for (const ReportCheck& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

ReportFile equilibrium_report(const std::string& kind, const InstanceFile& file,
                              const Vector& lambda, const EffortProfile& x,
                              const SolverTrace* trace, double epsilon) {
  ReportFile r;
  r.kind = kind;
  r.contestants = file.contestant_ids;
  r.designers = file.designer_ids;
  r.lambda.assign(lambda.data(), lambda.data() + lambda.size());
  const ProbabilityMap p = winning_probabilities(file.profile, x);
  for (const ContestConfig& c : file.profile.contests) {
    for (int i : c.participants) {
      r.efforts.push_back({file.contestant_ids.at(i), c.id, x.at(i, c.id),
                           p.at(EffortKey{i, c.id})});
    }
  }
  const Utilities u = utilities(file.instance, file.profile, x);
  r.contestant_utilities.assign(u.contestants.data(),
                                u.contestants.data() + u.contestants.size());
  r.designer_utilities.assign(u.designers.data(),
                              u.designers.data() + u.designers.size());
  if (trace) {
    ReportSolver s;
    s.epsilon = epsilon;
    s.step_mode = to_string(trace->step_mode);
    s.iterations = trace->iterations;
    s.final_residual =
        trace->residual_history.empty() ? 0.0 : trace->residual_history.back();
    s.converged = trace->converged;
    s.residual_history = trace->residual_history;
    r.solver = s;
  }
  return r;
}

ReportFile parse_report(const std::string& text) {
  const json doc = parse_json(text);
  ReportFile r;
  try {
    r.kind = doc.at("kind").get<std::string>();
    r.contestants = doc.at("contestants").get<std::vector<std::string>>();
    r.designers = doc.at("designers").get<std::vector<std::string>>();
    r.lambda = doc.at("lambda").get<std::vector<double>>();
    for (const json& e : doc.at("efforts")) {
      r.efforts.push_back({e.at("contestant").get<std::string>(),
                           e.at("contest").get<std::string>(),
                           e.at("effort").get<double>(),
                           e.at("probability").get<double>()});
    }
    r.contestant_utilities =
        doc.at("utilities").at("contestants").get<std::vector<double>>();
    r.designer_utilities =
        doc.at("utilities").at("designers").get<std::vector<double>>();
    if (doc.contains("solver") && !doc.at("solver").is_null()) {
      const json& s = doc.at("solver");
      ReportSolver rs;
      rs.epsilon = s.at("epsilon").get<double>();
      rs.step_mode = s.at("step_mode").get<std::string>();
      rs.iterations = s.at("iterations").get<long>();
      rs.final_residual = s.at("final_residual").get<double>();
      rs.converged = s.at("converged").get<bool>();
      rs.residual_history = s.at("residual_history").get<std::vector<double>>();
      r.solver = rs;
    }
    for (const json& c : doc.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(),
                          c.at("passed").get<bool>(),
                          c.at("detail").get<std::string>()});
    }
    for (const json& v : doc.at("values")) {
      r.values.push_back(
          {v.at("name").get<std::string>(), v.at("value").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string emit_report(const ReportFile& r) {
  json doc;
  doc["kind"] = r.kind;
  doc["contestants"] = r.contestants;
  doc["designers"] = r.designers;
  doc["lambda"] = r.lambda;
  doc["efforts"] = json::array();
  for (const ReportEffort& e : r.efforts) {
    doc["efforts"].push_back({{"contestant", e.contestant},
                              {"contest", e.contest},
                              {"effort", e.effort},
                              {"probability", e.probability}});
  }
  doc["utilities"] = {{"contestants", r.contestant_utilities},
                      {"designers", r.designer_utilities}};
  if (r.solver) {
    const ReportSolver& s = *r.solver;
    doc["solver"] = {{"epsilon", s.epsilon},
                     {"step_mode", s.step_mode},
                     {"iterations", s.iterations},
                     {"final_residual", s.final_residual},
                     {"converged", s.converged},
                     {"residual_history", s.residual_history}};
  } else {
    doc["solver"] = nullptr;
  }
  doc["checks"] = json::array();
  for (const ReportCheck& c : r.checks) {
    doc["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  doc["values"] = json::array();
  for (const ReportValue& v : r.values) {
    doc["values"].push_back({{"name", v.name}, {"value", v.value}});
  }
  return doc.dump(2) + "\n";
}

std::string residual_csv(const ReportFile& r) {
  std::string out = "iteration,max_relative_residual\n";
  if (!r.solver) return out;
  const auto& h = r.solver->residual_history;
  for (size_t t = 0; t < h.size(); ++t) {
    out += std::to_string(t) + "," + csv_number(h[t]) + "\n";
  }
  return out;
}

std::string effort_csv(const ReportFile& r) {
  std::string out = "contestant,contest,effort,probability\n";
  for (const ReportEffort& e : r.efforts) {
    out += csv_text(e.contestant) + "," + csv_text(e.contest) + "," +
           csv_number(e.effort) + "," + csv_number(e.probability) + "\n";
  }
  return out;
}

std::string utility_csv(const ReportFile& r) {
  std::string out = "role,id,utility\n";
  for (size_t i = 0; i < r.contestant_utilities.size(); ++i) {
    out += "contestant," + csv_text(r.contestants.at(i)) + "," +
           csv_number(r.contestant_utilities[i]) + "\n";
  }
  for (size_t j = 0; j < r.designer_utilities.size(); ++j) {
    out += "designer," + csv_text(r.designers.at(j)) + "," +
           csv_number(r.designer_utilities[j]) + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace plcc
