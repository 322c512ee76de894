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

#include <random>

#include "polyrepair/demo.h"
#include "polyrepair/symbolic.h"

namespace polyrepair {
namespace {

TEST(AffineExpr, Evaluate) {
  VariableRegistry reg;
  const VarId v = reg.AddAuxiliary("v");
  Assignment a;
  a.Set(v, -1.0);
  EXPECT_EQ((2.0 * AffineExpr::Variable(v) + AffineExpr(3.0)).Evaluate(a), 1.0);
  EXPECT_EQ(AffineExpr(4.5).Evaluate(Assignment{}), 4.5);
  const VarId w = reg.AddAuxiliary("w");
  EXPECT_THROW(AffineExpr::Variable(w).Evaluate(a), InputError);
}

TEST(AffineExpr, DropsCancelledTerms) {
  VariableRegistry reg;
  const VarId v = reg.AddAuxiliary("v");
  AffineExpr e = AffineExpr::Variable(v, 0.5);
  e -= AffineExpr::Variable(v, 0.5);
  EXPECT_TRUE(e.IsConstant());
}

TEST(Satisfies, EmptyFormulaIsTrue) {
  EXPECT_TRUE(Satisfies(LinearFormula{}, Assignment{}, 0.0));
}

TEST(CondReLU, Example) {
  VariableRegistry reg;
  const VarId a = reg.AddAuxiliary("x0"), b = reg.AddAuxiliary("x1");
  const SymbolicPoint x{AffineExpr::Variable(a), AffineExpr::Variable(b)};
  const ConditionalOutput out = CondReLU(x, Point{5.0, -2.0});
  EXPECT_EQ(out.output[0], x[0]);
  EXPECT_TRUE(out.output[1].IsConstant());
  EXPECT_EQ(out.output[1].constant(), 0.0);
  ASSERT_EQ(out.formula.size(), 2u);
  EXPECT_EQ(out.formula.conjuncts[0], LinearConstraint::Ge(x[0], 0.0));
  EXPECT_EQ(out.formula.conjuncts[1], LinearConstraint::Le(x[1], 0.0));
}

TEST(CondReLU, NegativeReferenceAgreesWithConcrete) {
  VariableRegistry reg;
  const VarId v = reg.AddAuxiliary("v");
  const SymbolicPoint x{3.0 * AffineExpr::Variable(v) + AffineExpr(1.0)};
  const ConditionalOutput out = CondReLU(x, Point{-0.5});
  Assignment a;
  a.Set(v, -1.0);
  EXPECT_TRUE(Satisfies(out.formula, a, 0.0));
  EXPECT_EQ(Evaluate(out.output, a)[0], Activate(Activation::kReLU, -2.0));
  EXPECT_THROW(CondReLU(x, Point{1.0, 2.0}), InputError);
}

TEST(CondHardswish, Example) {
  VariableRegistry reg;
  const VarId a = reg.AddAuxiliary("x0"), b = reg.AddAuxiliary("x1");
  const SymbolicPoint x{AffineExpr::Variable(a), AffineExpr::Variable(b)};
  const ConditionalOutput out = CondHardswish(x, Point{5.0, -2.0});
  EXPECT_EQ(out.output[0], x[0]);
  EXPECT_EQ(out.output[1].constant(), 0.0);
  EXPECT_EQ(out.formula.conjuncts[0], LinearConstraint::Ge(x[0], 3.0));
  EXPECT_EQ(out.formula.conjuncts[1], LinearConstraint::Le(x[1], -3.0));
}

TEST(CondHardswish, SatisfyingAssignmentsAgreeWithConcrete) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  VariableRegistry reg;
  const VarId a = reg.AddAuxiliary("a"), b = reg.AddAuxiliary("b");
  const SymbolicPoint x{AffineExpr::Variable(a, 2.0) + AffineExpr(1.0),
                        AffineExpr::Variable(a) - AffineExpr::Variable(b)};
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    Assignment s;
    s.Set(a, u(rng));
    s.Set(b, u(rng));
    const Point ref{u(rng), u(rng)};
    const ConditionalOutput out = CondHardswish(x, ref);
    if (!Satisfies(out.formula, s, 0.0)) continue;
    ++checked;
    const Point pre = Evaluate(x, s);
    const Point post = Evaluate(out.output, s);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(post[j], Activate(Activation::kHardswish, pre[j]));
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(CondIdentity, PassThrough) {
  VariableRegistry reg;
  const SymbolicPoint x{AffineExpr::Variable(reg.AddAuxiliary("v")), AffineExpr(2.0)};
  const ConditionalOutput out = CondIdentity(x, Point{-1.0, 1.0});
  EXPECT_EQ(out.output, x);
  EXPECT_TRUE(out.formula.empty());
}

TEST(SymbolicSlice, VariableCounts) {
  VariableRegistry reg;
  const SymbolicSlice full(toy::Dnn1(), reg);
  EXPECT_EQ(full.num_weight_vars(), 3u);
  EXPECT_EQ(full.num_bias_vars(), 4u);
  VariableRegistry reg2;
  const SymbolicSlice tail(toy::Dnn1().Slice(1, 2), reg2, 1);
  EXPECT_EQ(tail.num_weight_vars(), 3u);
  EXPECT_EQ(tail.num_bias_vars(), 1u);
  EXPECT_EQ(reg2.info(tail.weight(2, 0)).address, ParamAddress::Weight(1, 2, 0));
  EXPECT_EQ(reg2.info(tail.weight(2, 0)).original, 1.0);
}

TEST(CondForwardPoint, ToyExpressions) {
  VariableRegistry reg;
  const SymbolicSlice slice(toy::Dnn1(), reg);
  const ConditionalOutput out = CondForwardPoint(slice, Point{-1.5}, Point{-1.5});
  ASSERT_EQ(out.output.size(), 1u);
  AffineExpr expected = AffineExpr::Variable(slice.weight(0, 0), -0.75) +
                        AffineExpr::Variable(slice.bias(0, 0), 0.5) +
                        AffineExpr::Variable(slice.bias(1, 0));
  EXPECT_EQ(out.output[0], expected);
  ASSERT_EQ(out.formula.size(), 3u);
  auto pre = [&](std::size_t j) {
    return AffineExpr::Variable(slice.weight(0, j), -1.5) + AffineExpr::Variable(slice.bias(0, j));
  };
  EXPECT_EQ(out.formula.conjuncts[0], LinearConstraint::Ge(pre(0), 0.0));
  EXPECT_EQ(out.formula.conjuncts[1], LinearConstraint::Le(pre(1), 0.0));
  EXPECT_EQ(out.formula.conjuncts[2], LinearConstraint::Le(pre(2), 0.0));

  Assignment theta = OriginalAssignment(slice);
  EXPECT_DOUBLE_EQ(out.output[0].Evaluate(theta), 0.25);
  EXPECT_TRUE(Satisfies(out.formula, theta, 0.0));
  theta.Set(slice.weight(0, 0), 2.0);
  EXPECT_FALSE(Satisfies(out.formula, theta, 0.0));

  const ConditionalOutput second = CondForwardPoint(slice, Point{-0.5}, Point{-0.5});
  EXPECT_EQ(second.output[0], AffineExpr::Variable(slice.weight(0, 0), -0.25) +
                                  AffineExpr::Variable(slice.bias(0, 0), 0.5) +
                                  AffineExpr::Variable(slice.bias(1, 0)));
}

TEST(CondForwardPolytope, SharedReference) {
  VariableRegistry reg;
  const SymbolicSlice slice(toy::Dnn1(), reg);
  const VPolytope p1({{-1.5}, {-0.5}});
  const PolytopeConditionalOutput out = CondForwardPolytope(slice, p1, RefStrategy::kFirstVertex);
  EXPECT_EQ(out.reference, (Point{-1.5}));
  ASSERT_EQ(out.outputs.size(), 2u);
  EXPECT_EQ(out.outputs[0], CondForwardPoint(slice, Point{-1.5}, Point{-1.5}).output);
  EXPECT_EQ(out.outputs[1], CondForwardPoint(slice, Point{-0.5}, Point{-1.5}).output);
  EXPECT_EQ(out.formula.size(), 6u);
  const PolytopeConditionalOutput again =
      CondForwardPolytope(slice, p1, RefStrategy::kFirstVertex);
  EXPECT_EQ(again.outputs, out.outputs);
  EXPECT_EQ(again.formula, out.formula);
  EXPECT_EQ(CalcRef(p1, RefStrategy::kCentroid), (Point{-1.0}));
  const PolytopeConditionalOutput single =
      CondForwardPolytope(slice, VPolytope::Singleton({-0.5}), RefStrategy::kFirstVertex);
  EXPECT_EQ(single.outputs[0], CondForwardPoint(slice, Point{-0.5}, Point{-0.5}).output);
  EXPECT_THROW(CondForwardPolytope(slice, VPolytope({{1.0, 2.0}}), RefStrategy::kFirstVertex),
               InputError);
}

TEST(CondForwardPoint, MatchesForwardOnRandomReluNetworks) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = RandomNetwork(1000 + trial, {3, 6, 5, 2});
    Point x(3);
    for (double& v : x) v = u(rng);
    VariableRegistry reg;
    const SymbolicSlice slice(net, reg);
    const ConditionalOutput out = CondForwardPoint(slice, x, x);
    const Assignment theta = OriginalAssignment(slice);
    const Point y = Evaluate(out.output, theta);
    const Point expect = net.Forward(x);
    for (std::size_t j = 0; j < y.size(); ++j) EXPECT_NEAR(y[j], expect[j], 1e-9);
    EXPECT_TRUE(Satisfies(out.formula, theta, 0.0));
  }
}

TEST(RefStrategy, Names) {
  EXPECT_EQ(ParseRefStrategy(RefStrategyName(RefStrategy::kCentroid)), RefStrategy::kCentroid);
  EXPECT_EQ(ParseRefStrategy("first-vertex"), RefStrategy::kFirstVertex);
  EXPECT_THROW(ParseRefStrategy("median"), InputError);
}

}  // namespace
}  // namespace polyrepair
