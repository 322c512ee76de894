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

#include <filesystem>
#include <set>

#include "polyrepair/demo.h"
#include "polyrepair/io.h"
#include "polyrepair/repair.h"

namespace polyrepair {
namespace {

std::vector<OutputFormula> Psi(const RepairSpec& spec) { return spec.formulas(); }

TEST(Partition, ParseAndPrint) {
  const Partition p = Partition::Parse("0:1, 1:2");
  ASSERT_EQ(p.stages.size(), 2u);
  EXPECT_EQ(p.stages[1], (std::pair<std::size_t, std::size_t>{1, 2}));
  EXPECT_EQ(p.ToString(), "0:1,1:2");
  EXPECT_TRUE(Partition::Parse("").stages.empty());
  EXPECT_THROW(Partition::Parse("0-1"), InputError);
  EXPECT_THROW(Partition::Parse("a:1"), InputError);
  EXPECT_THROW(Partition::Parse("0:1,"), InputError);
}

TEST(ValidatePartition, Conditions) {
  const Network net = toy::Dnn1();
  const auto polys = toy::PolytopeSpec().polytopes();
  const std::vector<VPolytope> points{VPolytope::Singleton({-1.5}), VPolytope::Singleton({3.0})};
  EXPECT_FALSE(ValidatePartition(net, {}, 0, points).has_value());
  EXPECT_FALSE(ValidatePartition(net, {}, 1, points).has_value());
  EXPECT_FALSE(ValidatePartition(net, Partition::Parse("0:1"), 1, polys).has_value());
  EXPECT_TRUE(ValidatePartition(net, Partition::Parse("1:0"), 1, polys).has_value());
  EXPECT_TRUE(ValidatePartition(net, Partition::Parse("0:3"), 1, polys).has_value());
  EXPECT_TRUE(ValidatePartition(net, Partition::Parse("0:1,2:2"), 1, polys).has_value());
  EXPECT_TRUE(ValidatePartition(net, Partition::Parse("0:1"), 2, polys).has_value());
  // [0, 1) is not linear on P2 without a shift.
  EXPECT_TRUE(ValidatePartition(net, {}, 1, polys).has_value());
  EXPECT_FALSE(ValidatePartition(net, {}, 0, polys).has_value());
}

TEST(PointwiseRepair, ToyExample) {
  const RepairSpec pts = toy::PointSpec();
  const RepairOutcome r = PointwiseRepair(toy::Dnn1(), {{-1.5}, {-0.5}}, Psi(pts), 0);
  ASSERT_TRUE(r.network.has_value()) << r.report.message;
  for (double x : {-1.5, -0.5}) {
    const double y = r.network->Forward(Point{x})[0];
    EXPECT_GE(y, -0.1 - 1e-6);
    EXPECT_LE(y, 0.1 + 1e-6);
  }
  EXPECT_TRUE(r.network->SameArchitecture(toy::Dnn1()));
  EXPECT_TRUE(r.report.verification.has_value());
  EXPECT_TRUE(r.report.verification->passed());
}

TEST(PointwiseRepair, EmptyPointsReturnNetwork) {
  const RepairOutcome r = PointwiseRepair(toy::Dnn1(), {}, {}, 0);
  ASSERT_TRUE(r.network.has_value());
  EXPECT_EQ(*r.network, toy::Dnn1());
}

TEST(PointwiseRepair, SatisfiedPointHasZeroObjective) {
  const RepairOutcome r = PointwiseRepair(toy::Dnn2(), {{-1.5}},
                                          {OutputFormula::Bounds(1, 0, -0.1, 0.1)}, 0);
  ASSERT_TRUE(r.network.has_value());
  EXPECT_NEAR(r.report.stages.back().objective, 0.0, 1e-9);
}

TEST(VPolytopeRepair, ToyExample) {
  const RepairSpec spec = toy::PolytopeSpec();
  const RepairOutcome r = VPolytopeRepair(toy::Dnn1(), spec, Partition::Parse("0:1"), 1);
  ASSERT_TRUE(r.network.has_value()) << r.report.message;
  EXPECT_EQ(r.report.status, RepairStatus::kSuccess);
  ASSERT_EQ(r.report.stages.size(), 2u);
  EXPECT_EQ(r.report.stages[0].name, "shift[0]");
  EXPECT_EQ(r.report.stages[1].name, "final");
  VerifyOptions o;
  o.samples = 2000;
  EXPECT_TRUE(CheckPolytope(*r.network, spec, o).all_certified());
  EXPECT_TRUE(r.network->SameArchitecture(toy::Dnn1()));
  // After the shift the first layer is linear on both polytopes.
  for (const VPolytope& p : spec.polytopes()) {
    EXPECT_TRUE(IsLocallyLinear(r.network->Slice(0, 1), p).locally_linear);
  }
}

TEST(ShiftAndAssert, ReproducesSecondLayerRepair) {
  const RepairSpec spec = toy::PolytopeSpec();
  const StageOutcome st =
      ShiftAndAssert(toy::Dnn4(), toy::Dnn4(), spec.polytopes(), Psi(spec), 1);
  ASSERT_TRUE(st.network.has_value()) << st.report.message;
  VerifyOptions o;
  o.samples = 2000;
  EXPECT_TRUE(CheckPolytope(*st.network, spec, o).all_certified());
  // Only the second layer changes.
  for (const ParamEdit& e : DiffParameters(toy::Dnn4(), *st.network)) {
    EXPECT_EQ(e.address.layer, 1u);
  }
}

TEST(ShiftAndAssert, TopSpecKeepsLinearNetwork) {
  // DNN4 has a pre-activation exactly at 0 on P2, so the boundary margin
  // must be off for the original parameters to be feasible.
  RepairOptions o;
  o.piece_margin = 0.0;
  const RepairSpec spec = toy::PolytopeSpec();
  const StageOutcome st = ShiftAndAssert(toy::Dnn4(), toy::Dnn4(), spec.polytopes(), {}, 0, o);
  ASSERT_TRUE(st.network.has_value());
  EXPECT_NEAR(st.report.objective, 0.0, 1e-9);
  EXPECT_EQ(st.report.spec_constraints, 0u);
}

TEST(ShiftAndAssert, ConflictingSpecIsInfeasible) {
  const std::vector<VPolytope> polys{VPolytope::Singleton({1.0}), VPolytope::Singleton({1.0})};
  const std::vector<OutputFormula> psi{
      OutputFormula::Raw({{{1.0}, Relation::kGe, 1.0}}),
      OutputFormula::Raw({{{1.0}, Relation::kLe, 0.0}})};
  const StageOutcome st = ShiftAndAssert(toy::Dnn1(), toy::Dnn1(), polys, psi, 1);
  EXPECT_FALSE(st.network.has_value());
  EXPECT_EQ(st.report.solve_status, SolveStatus::kInfeasible);
  RepairSpec spec{{{polys[0], psi[0]}, {polys[1], psi[1]}}};
  const RepairOutcome r = VPolytopeRepair(toy::Dnn1(), spec, {}, 1);
  EXPECT_EQ(r.report.status, RepairStatus::kInfeasible);
  EXPECT_EQ(r.report.failed_stage, 0);
  EXPECT_FALSE(r.network.has_value());
}

TEST(VPolytopeRepair, SatisfiedSpecHasZeroObjective) {
  const RepairSpec spec = toy::PolytopeSpec();
  const RepairOutcome r = VPolytopeRepair(toy::Dnn5(), spec, {}, 1);
  ASSERT_TRUE(r.network.has_value());
  EXPECT_NEAR(r.report.stages.back().objective, 0.0, 1e-9);
  EXPECT_TRUE(r.report.edits.empty() ||
              std::all_of(r.report.edits.begin(), r.report.edits.end(), [](const ParamEdit& e) {
                return std::fabs(e.after - e.before) < 1e-9;
              }));
}

TEST(VPolytopeRepair, InvalidPartitionIsReported) {
  const RepairOutcome r =
      VPolytopeRepair(toy::Dnn1(), toy::PolytopeSpec(), Partition::Parse("1:0"), 1);
  EXPECT_EQ(r.report.status, RepairStatus::kInvalidPartition);
  EXPECT_FALSE(r.network.has_value());
}

TEST(VPolytopeRepair, EditLocality) {
  const Scenario sc = MakeAcasScenario(3, 4);
  const RepairOutcome r = VPolytopeRepair(sc.net, sc.spec, sc.partition, sc.k);
  if (!r.network) GTEST_SKIP() << RepairStatusName(r.report.status);
  std::set<std::pair<std::size_t, bool>> allowed;  // (layer, is_weight)
  for (const auto& [ki, li] : sc.partition.stages) {
    allowed.insert({ki, true});
    for (std::size_t l = ki; l < li; ++l) allowed.insert({l, false});
  }
  allowed.insert({sc.k, true});
  for (std::size_t l = sc.k; l < sc.net.num_layers(); ++l) allowed.insert({l, false});
  for (const ParamEdit& e : DiffParameters(sc.net, *r.network)) {
    const bool w = e.address.kind == ParamAddress::Kind::kWeight;
    EXPECT_TRUE(allowed.count({e.address.layer, w})) << e.address.ToString();
  }
}

TEST(PointwiseRepair, SameSystemAsSingletonPolytopes) {
  const std::filesystem::path a = std::filesystem::temp_directory_path() / "polyrepair_pw";
  const std::filesystem::path b = std::filesystem::temp_directory_path() / "polyrepair_vp";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  RepairOptions oa, ob;
  oa.dump_lp_dir = a.string();
  ob.dump_lp_dir = b.string();
  const RepairSpec pts = toy::PointSpec();
  PointwiseRepair(toy::Dnn1(), {{-1.5}, {-0.5}}, Psi(pts), 0, oa);
  VPolytopeRepair(toy::Dnn1(), pts, {}, 0, ob);
  std::vector<std::string> fa, fb;
  for (const auto& e : std::filesystem::directory_iterator(a)) fa.push_back(e.path().filename());
  for (const auto& e : std::filesystem::directory_iterator(b)) fb.push_back(e.path().filename());
  ASSERT_EQ(fa, fb);
  ASSERT_FALSE(fa.empty());
  for (const std::string& f : fa) {
    EXPECT_EQ(ReadFile((a / f).string()), ReadFile((b / f).string())) << f;
  }
}

TEST(VPolytopeRepair, CentroidReferenceAlsoWorks) {
  RepairOptions o;
  o.ref_strategy = RefStrategy::kCentroid;
  const RepairSpec spec = toy::PolytopeSpec();
  const RepairOutcome r = VPolytopeRepair(toy::Dnn1(), spec, Partition::Parse("0:1"), 1, o);
  if (r.network) {
    EXPECT_TRUE(CheckPolytope(*r.network, spec).all_certified());
  } else {
    EXPECT_NE(r.report.status, RepairStatus::kSuccess);
  }
}

TEST(VPolytopeRepair, Deterministic) {
  const RepairSpec spec = toy::PolytopeSpec();
  const RepairOutcome a = VPolytopeRepair(toy::Dnn1(), spec, Partition::Parse("0:1"), 1);
  const RepairOutcome b = VPolytopeRepair(toy::Dnn1(), spec, Partition::Parse("0:1"), 1);
  ASSERT_TRUE(a.network && b.network);
  EXPECT_EQ(*a.network, *b.network);
}

}  // namespace
}  // namespace polyrepair
