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

#ifndef POLYREPAIR_LP_H_
#define POLYREPAIR_LP_H_

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyrepair/symbolic.h"

namespace polyrepair {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpVariable {
  VarId id;
  double lower = -kInfinity;
  double upper = kInfinity;
  // Where the solver starts searching. Does not affect the optimum value.
  double start = 0.0;
};

// minimize objective subject to constraints and variable bounds.
struct LpProblem {
  std::vector<LpVariable> variables;
  std::vector<LinearConstraint> constraints;
  AffineExpr objective;

  void AddVariable(VarId id, double lower = -kInfinity, double upper = kInfinity,
                   double start = 0.0) {
    variables.push_back({id, lower, upper, start});
  }
  // Throws InputError if a constraint or the objective mentions a variable
  // that is not declared, or a variable is declared twice.
  void Validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericFailure };

std::string_view SolveStatusName(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericFailure;
  Assignment assignment;  // total over the problem's variables when optimal
  double objective = 0.0;
  long iterations = 0;
  std::string message;
};

enum class Backend { kRowSimplex, kTableau, kExternal };

std::string_view BackendName(Backend backend);
Backend ParseBackend(std::string_view name);

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-6;
  Backend backend = Backend::kRowSimplex;
  // Command for Backend::kExternal; invoked as `<command> <problem.json>
  // <solution.json>`.
  std::string external_command;
  // 0 picks a limit from the problem size.
  long max_iterations = 0;
};

// A solver backend. Every backend must be deterministic and return
// kOptimal only with an assignment satisfying all constraints within
// feas_tol.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual std::string_view name() const = 0;
  virtual SolveResult Solve(const LpProblem& problem,
                            const SolverOptions& options) const = 0;
};

// Two-phase primal simplex over the constraint rows with a dense basis
// inverse; default backend.
std::unique_ptr<LpSolver> MakeRowSimplexSolver();
// Textbook dense tableau, two phases, Bland's rule throughout. Small
// problems only.
std::unique_ptr<LpSolver> MakeTableauSolver();
// Runs an external program over the JSON interchange format.
std::unique_ptr<LpSolver> MakeExternalSolver();

std::unique_ptr<LpSolver> MakeSolver(Backend backend);

// Validates the problem, dispatches to the configured backend and re-checks
// every constraint of an optimal answer independently of the backend. A
// backend answer that fails the check becomes kNumericFailure.
SolveResult Solve(const LpProblem& problem, const SolverOptions& options = {});

// Objective encoding for repair: with d = [outputs - targets; params -
// originals], introduces t >= |d_i| (L-infinity) and s_i >= |d_i| (L1) and
// minimizes t + (1/|d|) * sum_i s_i.
struct DeltaObjective {
  AffineExpr objective;
  std::vector<LinearConstraint> constraints;
  VarId linf;
  std::vector<VarId> l1;
  std::vector<AffineExpr> deltas;
};

DeltaObjective BuildDeltaObjective(std::span<const SymbolicPoint> sym_outputs,
                                   std::span<const Point> targets,
                                   std::span<const std::pair<VarId, double>> params,
                                   VariableRegistry& registry);

// CPLEX LP text format.
std::string ToLpFormat(const LpProblem& problem,
                       const VariableRegistry* registry = nullptr);

// JSON interchange used by external backends. Variables are referred to by
// their position in problem.variables.
std::string ProblemToJson(const LpProblem& problem);
SolveResult SolutionFromJson(const std::string& text, const LpProblem& problem);

}  // namespace polyrepair

#endif  // POLYREPAIR_LP_H_
