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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "polyrepair/lp.h"

namespace polyrepair {
namespace {

AffineExpr V(VarId id, double c = 1.0) { return AffineExpr::Variable(id, c); }

SolverOptions With(Backend b) {
  SolverOptions o;
  o.backend = b;
  return o;
}

class BothBackends : public ::testing::TestWithParam<Backend> {};

TEST_P(BothBackends, AbsoluteValueOfShift) {
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  const VarId t = reg.AddAuxiliary("t");
  LpProblem p;
  p.AddVariable(x);
  p.AddVariable(t);
  p.constraints.push_back(LinearConstraint::Ge(V(t) - V(x), -3.0));
  p.constraints.push_back(LinearConstraint::Ge(V(t) + V(x), 3.0));
  p.objective = V(t);
  const SolveResult r = Solve(p, With(GetParam()));
  ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_NEAR(r.assignment.Get(t), 0.0, 1e-9);
  EXPECT_NEAR(r.assignment.Get(x), 3.0, 1e-9);
}

TEST_P(BothBackends, InfeasiblePair) {
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  LpProblem p;
  p.AddVariable(x);
  p.constraints.push_back(LinearConstraint::Ge(V(x), 1.0));
  p.constraints.push_back(LinearConstraint::Le(V(x), 0.0));
  EXPECT_EQ(Solve(p, With(GetParam())).status, SolveStatus::kInfeasible);
}

TEST_P(BothBackends, Unbounded) {
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  LpProblem p;
  p.AddVariable(x);
  p.constraints.push_back(LinearConstraint::Le(V(x), 5.0));
  p.objective = V(x);
  EXPECT_EQ(Solve(p, With(GetParam())).status, SolveStatus::kUnbounded);
}

TEST_P(BothBackends, BoundsAndEquality) {
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  const VarId y = reg.AddAuxiliary("y");
  LpProblem p;
  p.AddVariable(x, 0.0, 4.0);
  p.AddVariable(y, -1.0, kInfinity);
  p.constraints.push_back(LinearConstraint::Eq(V(x) + V(y), 2.0));
  p.objective = V(x, -1.0) + V(y, 0.5);
  const SolveResult r = Solve(p, With(GetParam()));
  ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_NEAR(r.assignment.Get(x), 3.0, 1e-9);
  EXPECT_NEAR(r.assignment.Get(y), -1.0, 1e-9);
  EXPECT_NEAR(r.objective, -3.5, 1e-9);
}

TEST_P(BothBackends, DeltaObjectiveWithFixedDeltas) {
  VariableRegistry reg;
  const VarId a = reg.AddParameter(ParamAddress::Bias(0, 0), 0.0);
  const VarId b = reg.AddParameter(ParamAddress::Bias(0, 1), 0.0);
  const std::pair<VarId, double> params[] = {{a, 0.0}, {b, 0.0}};
  DeltaObjective d = BuildDeltaObjective({}, {}, params, reg);
  LpProblem p;
  p.AddVariable(a);
  p.AddVariable(b);
  p.AddVariable(d.linf);
  for (VarId s : d.l1) p.AddVariable(s);
  p.constraints = d.constraints;
  p.constraints.push_back(LinearConstraint::Eq(V(a), 1.0));
  p.constraints.push_back(LinearConstraint::Eq(V(b), -2.0));
  p.objective = d.objective;
  const SolveResult r = Solve(p, With(GetParam()));
  ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_NEAR(r.objective, 3.5, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Lp, BothBackends,
                         ::testing::Values(Backend::kRowSimplex, Backend::kTableau),
                         [](const auto& info) {
                           return info.param == Backend::kRowSimplex ? "RowSimplex" : "Tableau";
                         });

TEST(DeltaObjective, ZeroDeltasGiveZero) {
  VariableRegistry reg;
  const VarId a = reg.AddParameter(ParamAddress::Bias(0, 0), 0.5);
  const std::pair<VarId, double> params[] = {{a, 0.5}};
  std::vector<SymbolicPoint> outs = {{V(a) + AffineExpr(1.0)}};
  std::vector<Point> targets = {{1.5}};
  DeltaObjective d = BuildDeltaObjective(outs, targets, params, reg);
  EXPECT_EQ(d.deltas.size(), 2u);
  EXPECT_EQ(d.l1.size(), 2u);
  EXPECT_EQ(d.constraints.size(), 8u);
  LpProblem p;
  p.AddVariable(a, -kInfinity, kInfinity, 0.5);
  p.AddVariable(d.linf);
  for (VarId s : d.l1) p.AddVariable(s);
  p.constraints = d.constraints;
  p.objective = d.objective;
  const SolveResult r = Solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_NEAR(r.assignment.Get(a), 0.5, 1e-12);
  for (VarId s : d.l1) EXPECT_NEAR(r.assignment.Get(s), 0.0, 1e-12);
}

TEST(DeltaObjective, AlignmentMismatchThrows) {
  VariableRegistry reg;
  std::vector<SymbolicPoint> outs = {{AffineExpr(1.0)}};
  EXPECT_THROW(BuildDeltaObjective(outs, {}, {}, reg), InputError);
}

TEST(LpProblem, ValidateRejectsUndeclared) {
  LpProblem p;
  p.objective = V(VarId{3});
  EXPECT_THROW(p.Validate(), InputError);
}

// Random repair-shaped LPs: sparse rows, free parameters and a delta
// objective. The tableau backend is the oracle.
struct RandomLp {
  LpProblem problem;
  VariableRegistry registry;
};

RandomLp MakeRandomLp(std::mt19937_64& rng, int nparams, int nrows) {
  RandomLp out;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<VarId, double>> params;
  for (int i = 0; i < nparams; ++i) {
    const double orig = u(rng);
    params.emplace_back(out.registry.AddParameter(ParamAddress::Bias(0, i), orig), orig);
  }
  // Constraints built to be satisfied by a hidden point.
  std::vector<double> hidden(nparams);
  for (double& h : hidden) h = 2.0 * u(rng);
  for (int r = 0; r < nrows; ++r) {
    AffineExpr e;
    double at_hidden = 0.0;
    for (int i = 0; i < nparams; ++i) {
      if (u(rng) < 0.2) continue;
      const double c = u(rng);
      e.AddTerm(params[i].first, c);
      at_hidden += c * hidden[i];
    }
    const double slack = 0.5 * (u(rng) + 1.0);
    out.problem.constraints.push_back(LinearConstraint::Ge(e, at_hidden - slack));
  }
  std::vector<SymbolicPoint> outs;
  std::vector<Point> targets;
  for (int k = 0; k < 3; ++k) {
    AffineExpr e;
    for (int i = 0; i < nparams; ++i) e.AddTerm(params[i].first, u(rng));
    outs.push_back({e});
    targets.push_back({u(rng)});
  }
  DeltaObjective d = BuildDeltaObjective(outs, targets, params, out.registry);
  for (const auto& [id, orig] : params) out.problem.AddVariable(id, -kInfinity, kInfinity, orig);
  out.problem.AddVariable(d.linf);
  for (VarId s : d.l1) out.problem.AddVariable(s);
  for (auto& c : d.constraints) out.problem.constraints.push_back(c);
  out.problem.objective = d.objective;
  return out;
}

TEST(RowSimplex, MatchesTableauOnRandomLps) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 2 + trial % 7, 3 + trial % 11);
    const SolveResult a = Solve(lp.problem, With(Backend::kRowSimplex));
    const SolveResult b = Solve(lp.problem, With(Backend::kTableau));
    ASSERT_EQ(a.status, SolveStatus::kOptimal) << trial << ": " << a.message;
    ASSERT_EQ(b.status, SolveStatus::kOptimal) << trial << ": " << b.message;
    EXPECT_NEAR(a.objective, b.objective, 1e-7) << trial;
  }
}

TEST(RowSimplex, Deterministic) {
  std::mt19937_64 rng(11);
  RandomLp lp = MakeRandomLp(rng, 8, 12);
  const SolveResult a = Solve(lp.problem);
  const SolveResult b = Solve(lp.problem);
  ASSERT_EQ(a.status, SolveStatus::kOptimal);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(RowSimplex, DetectsInfeasibleRandomSystem) {
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  const VarId y = reg.AddAuxiliary("y");
  LpProblem p;
  p.AddVariable(x);
  p.AddVariable(y);
  p.constraints.push_back(LinearConstraint::Ge(V(x) + V(y), 2.0));
  p.constraints.push_back(LinearConstraint::Le(V(x), 0.5));
  p.constraints.push_back(LinearConstraint::Le(V(y), 0.5));
  EXPECT_EQ(Solve(p).status, SolveStatus::kInfeasible);
}

TEST(LpFormat, ContainsSectionsAndNames) {
  VariableRegistry reg;
  const VarId x = reg.AddParameter(ParamAddress::Weight(0, 1, 2), 1.0);
  LpProblem p;
  p.AddVariable(x, 0.0, 1.0);
  p.constraints.push_back(LinearConstraint::Ge(V(x, 2.0), 1.0));
  p.objective = V(x);
  const std::string text = ToLpFormat(p, &reg);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("W0(1,2)"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(ExternalBackend, MatchesEmbeddedSolver) {
  const std::string script = std::string(POLYREPAIR_SOURCE_DIR) + "/tools/scipy_lp_backend.py";
  if (std::system("python3 -c 'import scipy' >/dev/null 2>&1") != 0) {
    GTEST_SKIP() << "python3 with scipy not available";
  }
  SolverOptions ext = With(Backend::kExternal);
  ext.external_command = "python3 " + script;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 5, 8);
    const SolveResult a = Solve(lp.problem);
    const SolveResult b = Solve(lp.problem, ext);
    ASSERT_EQ(b.status, SolveStatus::kOptimal) << b.message;
    EXPECT_NEAR(a.objective, b.objective, 1e-6);
  }
  VariableRegistry reg;
  const VarId x = reg.AddAuxiliary("x");
  LpProblem p;
  p.AddVariable(x);
  p.constraints.push_back(LinearConstraint::Ge(V(x), 1.0));
  p.constraints.push_back(LinearConstraint::Le(V(x), 0.0));
  EXPECT_EQ(Solve(p, ext).status, SolveStatus::kInfeasible);
}

}  // namespace
}  // namespace polyrepair
