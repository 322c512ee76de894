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
#include <random>

#include "polyrepair/demo.h"
#include "polyrepair/io.h"

namespace polyrepair {
namespace {

using nlohmann::json;

TEST(NetworkJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = RandomNetwork(trial, {5, 7, 3}, Activation::kHardswish);
    // Awkward values: subnormal, tiny, large, thirds.
    net.SetParameter(ParamAddress::Weight(0, 0, 0), 4.9406564584124654e-324);
    net.SetParameter(ParamAddress::Weight(0, 1, 0), 1.0 / 3.0);
    net.SetParameter(ParamAddress::Bias(1, 2), u(rng) * 1e200);
    const Network back = NetworkFromJson(json::parse(NetworkToJson(net).dump()));
    EXPECT_EQ(back, net);
  }
}

TEST(NetworkJson, FileRoundTrip) {
  const std::string path = testing::TempDir() + "/net.json";
  SaveNetwork(path, toy::Dnn5());
  EXPECT_EQ(LoadNetwork(path), toy::Dnn5());
}

TEST(NetworkJson, Errors) {
  EXPECT_THROW(NetworkFromJson(json::parse(R"({"layers": []})")), InputError);
  EXPECT_THROW(NetworkFromJson(json::parse(R"({"layer": []})")), InputError);
  EXPECT_THROW(NetworkFromJson(json::parse(
                   R"({"layers": [{"weights": [[1]], "bias": [0], "activation": "tanh"}]})")),
               InputError);
  EXPECT_THROW(NetworkFromJson(json::parse(
                   R"({"layers": [{"weights": [[1, 2], [3]], "bias": [0, 0], "activation": "relu"}]})")),
               InputError);
  EXPECT_THROW(NetworkFromJson(json::parse(
                   R"({"layers": [{"weights": [["x"]], "bias": [0], "activation": "relu"}]})")),
               InputError);
  EXPECT_THROW(LoadNetwork("/nonexistent/net.json"), InputError);
  const std::string path = testing::TempDir() + "/broken.json";
  WriteFile(path, "{\"layers\": [");
  EXPECT_THROW(LoadNetwork(path), InputError);
}

TEST(SpecJson, RoundTrip) {
  RepairSpec spec = toy::PolytopeSpec();
  spec.items.push_back({VPolytope::Singleton({0.5}), OutputFormula::Class(0, ClassMode::kArgmin, 0.25)});
  const RepairSpec back = SpecFromJson(json::parse(SpecToJson(spec).dump()));
  ASSERT_EQ(back.items.size(), spec.items.size());
  for (std::size_t i = 0; i < spec.items.size(); ++i) {
    EXPECT_EQ(back.items[i].polytope.vertices(), spec.items[i].polytope.vertices());
    EXPECT_EQ(SpecToJson(RepairSpec{{back.items[i]}}), SpecToJson(RepairSpec{{spec.items[i]}}));
  }
  ASSERT_TRUE(back.items.back().psi.is_classify());
  EXPECT_EQ(back.items.back().psi.classify()->margin, 0.25);
}

TEST(SpecJson, Errors) {
  EXPECT_THROW(SpecFromJson(json::parse(R"({"items": [{"polytope": [], "psi": {"raw": []}}]})")),
               InputError);
  EXPECT_THROW(SpecFromJson(json::parse(R"({"items": [{"polytope": [[1]], "psi": {}}]})")),
               InputError);
  EXPECT_THROW(
      SpecFromJson(json::parse(
          R"({"items": [{"polytope": [[1]], "psi": {"raw": [{"coeffs": [1], "rel": "<", "rhs": 0}]}}]})")),
      InputError);
  EXPECT_THROW(
      SpecFromJson(json::parse(
          R"({"items": [{"polytope": [[1]], "psi": {"classify": {"label": 0, "mode": "max"}}}]})")),
      InputError);
}

TEST(SpecValidate, WidthMismatch) {
  RepairSpec spec = toy::PolytopeSpec();
  EXPECT_NO_THROW(spec.Validate(toy::Dnn1()));
  spec.items.push_back({VPolytope::Singleton({1.0, 2.0}), OutputFormula()});
  EXPECT_THROW(spec.Validate(toy::Dnn1()), InputError);
  RepairSpec wide{{{VPolytope::Singleton({1.0}), OutputFormula::Bounds(2, 1, 0.0, 1.0)}}};
  EXPECT_THROW(wide.Validate(toy::Dnn1()), InputError);
  RepairSpec label{{{VPolytope::Singleton({1.0}), OutputFormula::Class(3, ClassMode::kArgmax)}}};
  EXPECT_THROW(label.Validate(toy::Dnn1()), InputError);
}

TEST(OutputFormula, ClassifyDesugars) {
  const OutputFormula f = OutputFormula::Class(1, ClassMode::kArgmax, 0.5);
  const auto rows = f.Desugar(3);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].coeffs, (std::vector<double>{-1.0, 1.0, 0.0}));
  EXPECT_EQ(rows[0].rel, Relation::kGe);
  EXPECT_EQ(rows[0].rhs, 0.5);
  EXPECT_TRUE(f.Holds(std::vector<double>{0.0, 1.0, 0.4}, 0.0));
  EXPECT_FALSE(f.Holds(std::vector<double>{0.0, 1.0, 0.6}, 0.0));
  const OutputFormula g = OutputFormula::Class(0, ClassMode::kArgmin, 0.0);
  EXPECT_TRUE(g.Holds(std::vector<double>{-1.0, 0.0}, 0.0));
  EXPECT_TRUE(std::isinf(OutputFormula().Slack(std::vector<double>{1.0})));
}

TEST(DatasetCsv, ParseAndWrite) {
  const Dataset d = ParseDatasetCsv("f0,f1,label\n0.5,-1,2\n1e-3,3,0\n", ClassMode::kArgmin);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.features[1], (Point{1e-3, 3.0}));
  EXPECT_EQ(d.labels[0], 2u);
  EXPECT_EQ(d.mode, ClassMode::kArgmin);
  const Dataset back = ParseDatasetCsv(DatasetToCsv(d), ClassMode::kArgmin);
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(DatasetCsv, Errors) {
  EXPECT_THROW(ParseDatasetCsv("f0,f1\n1,2\n", ClassMode::kArgmax), InputError);
  EXPECT_THROW(ParseDatasetCsv("f0,label\n1,2,3\n", ClassMode::kArgmax), InputError);
  EXPECT_THROW(ParseDatasetCsv("f0,label\n1,0.5\n", ClassMode::kArgmax), InputError);
  EXPECT_THROW(ParseDatasetCsv("f0,label\nx,1\n", ClassMode::kArgmax), InputError);
}

TEST(Reports, RepairReportFields) {
  const RepairOutcome r =
      VPolytopeRepair(toy::Dnn1(), toy::PolytopeSpec(), Partition::Parse("0:1"), 1);
  const json j = RepairReportToJson(r.report);
  EXPECT_EQ(j.at("status"), "success");
  EXPECT_EQ(j.at("tool_version"), kVersion);
  EXPECT_EQ(j.at("config").at("partition"), json::parse("[[0, 1]]"));
  EXPECT_EQ(j.at("config").at("k"), 1);
  EXPECT_EQ(j.at("config").at("ref_strategy"), "first-vertex");
  EXPECT_TRUE(j.at("config").contains("feas_tol"));
  EXPECT_TRUE(j.at("config").contains("seed"));
  EXPECT_EQ(j.at("stages").size(), 2u);
  EXPECT_FALSE(j.at("edits").empty());
  EXPECT_TRUE(j.contains("verification"));
}

TEST(Reports, VerifyWitness) {
  const json j = VerifyReportToJson(CheckPolytope(toy::Dnn3(), toy::PolytopeSpec()));
  const json& item = j.at("items").at(1);
  EXPECT_EQ(item.at("status"), "failed");
  EXPECT_NEAR(item.at("witness").at("output").at(0).get<double>(), 0.532, 1e-3);
}

}  // namespace
}  // namespace polyrepair
