// Copyright 2026 The PolyRepair Authors
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

#include "polyrepair/lp.h"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace polyrepair {

namespace {

using json = nlohmann::json;

// Moves the constant of `expr` to the right-hand side.
LinearConstraint Canonical(AffineExpr expr, Relation rel, double rhs) {
  const double c = expr.constant();
  expr.AddConstant(-c);
  return {std::move(expr), rel, rhs - c};
}

std::unordered_map<std::uint32_t, std::size_t> ColumnIndex(const LpProblem& problem) {
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < problem.variables.size(); ++i) {
    index.emplace(problem.variables[i].id.value, i);
  }
  return index;
}

std::string LpName(const LpProblem& problem, std::size_t col,
                   const VariableRegistry* registry) {
  const VarId id = problem.variables[col].id;
  std::string name = "x" + std::to_string(id.value);
  if (registry != nullptr && id.value < registry->size()) {
    name += "_";
    for (char ch : registry->Name(id)) {
      if (ch == '[') ch = '(';
      else if (ch == ']') ch = ')';
      else if (ch == ' ') ch = '_';
      name += ch;
    }
  }
  return name;
}

void WriteLinear(std::ostream& os, const AffineExpr& e,
                 const std::unordered_map<std::uint32_t, std::size_t>& index,
                 const LpProblem& problem, const VariableRegistry* registry) {
  if (e.terms().empty()) {
    os << " 0 " << LpName(problem, 0, registry);
    return;
  }
  for (const auto& [id, coeff] : e.terms()) {
    os << (coeff < 0 ? " - " : " + ") << std::fabs(coeff) << " "
       << LpName(problem, index.at(id.value), registry);
  }
}

}  // namespace

void LpProblem::Validate() const {
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const LpVariable& v = variables[i];
    if (!index.emplace(v.id.value, i).second) {
      throw InputError("LP variable v" + std::to_string(v.id.value) + " declared twice");
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.start)) {
      throw InputError("LP variable v" + std::to_string(v.id.value) + " has bad bounds");
    }
  }
  auto check = [&](const AffineExpr& e, const std::string& where) {
    for (const auto& [id, coeff] : e.terms()) {
      if (!index.contains(id.value)) {
        throw InputError(where + " references undeclared variable v" +
                         std::to_string(id.value));
      }
      if (!std::isfinite(coeff)) throw InputError(where + " has a non-finite coefficient");
    }
    if (!std::isfinite(e.constant())) throw InputError(where + " has a non-finite constant");
  };
  check(objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check(constraints[i].expr, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) {
      throw InputError("constraint " + std::to_string(i) + " has a non-finite rhs");
    }
  }
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericFailure:
      return "numeric_failure";
  }
  return "numeric_failure";
}

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kRowSimplex:
      return "row-simplex";
    case Backend::kTableau:
      return "tableau";
    case Backend::kExternal:
      return "external";
  }
  return "row-simplex";
}

Backend ParseBackend(std::string_view name) {
  if (name == "row-simplex") return Backend::kRowSimplex;
  if (name == "tableau") return Backend::kTableau;
  if (name == "external") return Backend::kExternal;
  throw InputError("unknown LP backend '" + std::string(name) + "'");
}

std::unique_ptr<LpSolver> MakeSolver(Backend backend) {
  switch (backend) {
    case Backend::kRowSimplex:
      return MakeRowSimplexSolver();
    case Backend::kTableau:
      return MakeTableauSolver();
    case Backend::kExternal:
      return MakeExternalSolver();
  }
  return MakeRowSimplexSolver();
}

SolveResult Solve(const LpProblem& problem, const SolverOptions& options) {
  problem.Validate();
  SolveResult result = MakeSolver(options.backend)->Solve(problem, options);
  if (result.status != SolveStatus::kOptimal) return result;

  for (const LpVariable& v : problem.variables) {
    if (!result.assignment.IsBound(v.id)) {
      result.status = SolveStatus::kNumericFailure;
      result.message = "backend left v" + std::to_string(v.id.value) + " unassigned";
      return result;
    }
    const double x = result.assignment.Get(v.id);
    if (!std::isfinite(x) || x < v.lower - options.feas_tol ||
        x > v.upper + options.feas_tol) {
      result.status = SolveStatus::kNumericFailure;
      result.message = "backend answer violates the bounds of v" + std::to_string(v.id.value);
      return result;
    }
  }
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const double slack = problem.constraints[i].Slack(result.assignment);
    if (!(slack >= -options.feas_tol)) {
      result.status = SolveStatus::kNumericFailure;
      std::ostringstream os;
      os << "backend answer violates constraint " << i << " by " << -slack;
      result.message = os.str();
      return result;
    }
  }
  result.objective = problem.objective.Evaluate(result.assignment);
  return result;
}

DeltaObjective BuildDeltaObjective(std::span<const SymbolicPoint> sym_outputs,
                                   std::span<const Point> targets,
                                   std::span<const std::pair<VarId, double>> params,
                                   VariableRegistry& registry) {
  if (sym_outputs.size() != targets.size()) {
    throw InputError("delta objective: " + std::to_string(sym_outputs.size()) +
                     " symbolic outputs but " + std::to_string(targets.size()) + " targets");
  }
  DeltaObjective result;
  for (std::size_t v = 0; v < sym_outputs.size(); ++v) {
    if (sym_outputs[v].size() != targets[v].size()) {
      throw InputError("delta objective: output " + std::to_string(v) +
                       " dimension mismatch");
    }
    for (std::size_t j = 0; j < targets[v].size(); ++j) {
      result.deltas.push_back(sym_outputs[v][j] - AffineExpr(targets[v][j]));
    }
  }
  for (const auto& [id, original] : params) {
    result.deltas.push_back(AffineExpr::Variable(id) - AffineExpr(original));
  }

  result.linf = registry.AddAuxiliary("t_linf");
  const AffineExpr t = AffineExpr::Variable(result.linf);
  result.objective = t;
  const double weight =
      result.deltas.empty() ? 0.0 : 1.0 / static_cast<double>(result.deltas.size());
  result.constraints.reserve(4 * result.deltas.size());
  for (std::size_t i = 0; i < result.deltas.size(); ++i) {
    const AffineExpr& d = result.deltas[i];
    result.constraints.push_back(Canonical(t - d, Relation::kGe, 0.0));
    result.constraints.push_back(Canonical(t + d, Relation::kGe, 0.0));
  }
  for (std::size_t i = 0; i < result.deltas.size(); ++i) {
    const AffineExpr& d = result.deltas[i];
    const VarId s_id = registry.AddAuxiliary("s_l1_" + std::to_string(i));
    result.l1.push_back(s_id);
    const AffineExpr s = AffineExpr::Variable(s_id);
    result.constraints.push_back(Canonical(s - d, Relation::kGe, 0.0));
    result.constraints.push_back(Canonical(s + d, Relation::kGe, 0.0));
    result.objective.AddTerm(s_id, weight);
  }
  return result;
}

std::string ToLpFormat(const LpProblem& problem, const VariableRegistry* registry) {
  const auto index = ColumnIndex(problem);
  std::ostringstream os;
  os.precision(17);
  os << "\\ polyrepair LP: " << problem.variables.size() << " variables, "
     << problem.constraints.size() << " constraints\n";
  os << "Minimize\n obj:";
  if (problem.variables.empty()) {
    os << " 0\n";
  } else {
    WriteLinear(os, problem.objective, index, problem, registry);
    if (problem.objective.constant() != 0.0) {
      os << (problem.objective.constant() < 0 ? " - " : " + ")
         << std::fabs(problem.objective.constant());
    }
    os << "\n";
  }
  os << "Subject To\n";
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const LinearConstraint& c = problem.constraints[i];
    if (problem.variables.empty()) break;
    os << " c" << i << ":";
    WriteLinear(os, c.expr, index, problem, registry);
    os << " " << RelationSymbol(c.rel) << " " << (c.rhs - c.expr.constant()) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t col = 0; col < problem.variables.size(); ++col) {
    const LpVariable& v = problem.variables[col];
    const std::string name = LpName(problem, col, registry);
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << " " << name << " free\n";
    } else {
      os << " ";
      if (std::isinf(v.lower)) os << "-inf"; else os << v.lower;
      os << " <= " << name << " <= ";
      if (std::isinf(v.upper)) os << "+inf"; else os << v.upper;
      os << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

std::string ProblemToJson(const LpProblem& problem) {
  const auto index = ColumnIndex(problem);
  auto terms = [&](const AffineExpr& e) {
    json arr = json::array();
    for (const auto& [id, coeff] : e.terms()) arr.push_back({index.at(id.value), coeff});
    return arr;
  };
  json j;
  j["num_vars"] = problem.variables.size();
  json lower = json::array(), upper = json::array();
  for (const LpVariable& v : problem.variables) {
    lower.push_back(std::isinf(v.lower) ? json(nullptr) : json(v.lower));
    upper.push_back(std::isinf(v.upper) ? json(nullptr) : json(v.upper));
  }
  j["lower"] = lower;
  j["upper"] = upper;
  j["objective"] = {{"coeffs", terms(problem.objective)},
                    {"constant", problem.objective.constant()}};
  json rows = json::array();
  for (const LinearConstraint& c : problem.constraints) {
    rows.push_back({{"coeffs", terms(c.expr)},
                    {"rel", std::string(RelationSymbol(c.rel))},
                    {"rhs", c.rhs - c.expr.constant()}});
  }
  j["constraints"] = rows;
  return j.dump();
}

SolveResult SolutionFromJson(const std::string& text, const LpProblem& problem) {
  SolveResult result;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    result.message = std::string("unreadable solution: ") + e.what();
    return result;
  }
  const std::string status = j.value("status", "error");
  if (status == "infeasible") {
    result.status = SolveStatus::kInfeasible;
  } else if (status == "unbounded") {
    result.status = SolveStatus::kUnbounded;
  } else if (status == "optimal") {
    const json& x = j.at("x");
    if (!x.is_array() || x.size() != problem.variables.size()) {
      result.message = "solution vector has the wrong length";
      return result;
    }
    result.status = SolveStatus::kOptimal;
    for (std::size_t i = 0; i < problem.variables.size(); ++i) {
      result.assignment.Set(problem.variables[i].id, x[i].get<double>());
    }
    result.objective = j.value("objective", 0.0);
  } else {
    result.message = j.value("message", std::string("external solver error"));
  }
  result.iterations = j.value("iterations", 0L);
  return result;
}

}  // namespace polyrepair
