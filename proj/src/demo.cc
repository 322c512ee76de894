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

#include "polyrepair/demo.h"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace polyrepair {

namespace toy {

namespace {

Network TwoLayer(std::vector<double> w0, std::vector<double> b0, std::vector<double> w1,
                 double b1) {
  Layer first{Matrix::FromRows({w0}), std::move(b0), Activation::kReLU};
  Layer second{Matrix::FromRows({{w1[0]}, {w1[1]}, {w1[2]}}), {b1}, Activation::kIdentity};
  return Network({std::move(first), std::move(second)});
}

}  // namespace

Network Dnn1() { return TwoLayer({-1.0, 1.0, 0.5}, {0.0, -2.0, 0.0}, {0.5, -0.5, 1.0}, -0.5); }
Network Dnn2() { return TwoLayer({-0.4, 1.0, 0.5}, {0.0, -2.0, 0.0}, {0.5, -0.5, 1.0}, -0.2); }
Network Dnn3() { return TwoLayer({-0.4, 1.0, 0.366}, {0.0, -2.0, 0.0}, {0.5, -0.5, 1.0}, -0.2); }
Network Dnn4() {
  return TwoLayer({-1.0, 0.75, 1.0 / 3.0}, {0.0, -2.25, 0.0}, {0.5, -0.5, 1.0}, -0.5);
}
Network Dnn5() {
  return TwoLayer({-1.0, 0.75, 1.0 / 3.0}, {0.0, -2.25, 0.0}, {0.2, -0.5, 0.6}, -0.2);
}

RepairSpec PointSpec() {
  const OutputFormula psi = OutputFormula::Bounds(1, 0, -0.1, 0.1);
  return {{{VPolytope::Singleton({-1.5}), psi}, {VPolytope::Singleton({-0.5}), psi}}};
}

RepairSpec PolytopeSpec() {
  return {{{VPolytope({{-1.5}, {-0.5}}), OutputFormula::Bounds(1, 0, -0.1, 0.1)},
           {VPolytope({{1.5}, {3.0}}), OutputFormula::Bounds(1, 0, 0.0, 0.4)}}};
}

}  // namespace toy

Network RandomNetwork(std::uint64_t seed, const std::vector<std::size_t>& widths,
                      Activation hidden) {
  if (widths.size() < 2) throw InputError("a network needs at least two widths");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.weights = Matrix(widths[l], widths[l + 1]);
    const double scale = std::sqrt(2.0 / static_cast<double>(widths[l]));
    for (std::size_t r = 0; r < widths[l]; ++r) {
      for (std::size_t c = 0; c < widths[l + 1]; ++c) layer.weights(r, c) = scale * normal(rng);
    }
    layer.bias.resize(widths[l + 1]);
    for (double& b : layer.bias) b = 0.1 * normal(rng);
    layer.activation = l + 2 == widths.size() ? Activation::kIdentity : hidden;
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

Scenario MakeAcasScenario(std::uint64_t seed, std::size_t boxes) {
  Scenario sc;
  sc.net = RandomNetwork(seed, {5, 16, 16, 16, 16, 16, 16, 5});
  constexpr double kSide = 0.05;
  constexpr int kCells = 40;  // grid over [-1, 1]^5
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> cell(0, kCells - 1);
  std::set<std::vector<int>> seen;
  std::vector<VPolytope> mixed, uniform;
  for (int attempt = 0; attempt < 20000 && mixed.size() < boxes; ++attempt) {
    std::vector<int> idx(5);
    for (int& i : idx) i = cell(rng);
    if (!seen.insert(idx).second) continue;
    Point lo(5), hi(5);
    for (int i = 0; i < 5; ++i) {
      lo[i] = -1.0 + kSide * idx[i];
      hi[i] = lo[i] + kSide;
    }
    VPolytope box = VPolytope::Box(lo, hi);
    const std::size_t label = ArgExtreme(sc.net.Forward(box.Centroid()), ClassMode::kArgmin);
    bool disagree = false;
    for (const Point& v : box.vertices()) {
      if (ArgExtreme(sc.net.Forward(v), ClassMode::kArgmin) != label) disagree = true;
    }
    (disagree ? mixed : uniform).push_back(std::move(box));
  }
  for (std::size_t i = 0; mixed.size() < boxes && i < uniform.size(); ++i) {
    mixed.push_back(uniform[i]);
  }
  for (const VPolytope& box : mixed) {
    const std::size_t label = ArgExtreme(sc.net.Forward(box.Centroid()), ClassMode::kArgmin);
    sc.spec.items.push_back({box, OutputFormula::Class(label, ClassMode::kArgmin)});
  }
  for (std::size_t l = 0; l + 1 < sc.net.num_layers(); ++l) sc.partition.stages.emplace_back(l, l + 1);
  sc.k = sc.net.num_layers() - 1;
  return sc;
}

Scenario MakeRobustBoxScenario(std::uint64_t seed, std::size_t d) {
  constexpr std::size_t kInputs = 16;
  if (d == 0 || d > kInputs) throw InputError("d must lie in [1, 16]");
  Scenario sc;
  sc.net = RandomNetwork(seed, {kInputs, 24, 24, 24, 10});
  std::mt19937_64 rng(seed + 101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point center(kInputs);
  for (double& x : center) x = u(rng);
  constexpr double kEps = 0.1;
  std::vector<Point> vertices;
  vertices.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point v = center;
    for (std::size_t i = 0; i < d; ++i) v[i] += (mask >> i) & 1 ? kEps : -kEps;
    vertices.push_back(std::move(v));
  }
  const std::size_t label = ArgExtreme(sc.net.Forward(center), ClassMode::kArgmax);
  sc.spec.items.push_back({VPolytope(std::move(vertices)), OutputFormula::Class(label, ClassMode::kArgmax)});
  sc.partition.stages = {{0, 1}};
  sc.k = 1;
  return sc;
}

namespace {

struct Table {
  std::ostream& out;
  int failures = 0;

  void Row(const std::string& name, bool ok, const std::string& detail = "") {
    if (!ok) ++failures;
    out << "  " << std::left << std::setw(66) << name << (ok ? "PASS" : "FAIL");
    if (!detail.empty()) out << "  " << detail;
    out << "\n";
  }
};

std::string Fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void PrintStages(std::ostream& out, const RepairReport& report) {
  for (const StageReport& s : report.stages) {
    out << "  stage " << std::left << std::setw(9) << s.name << " k=" << s.k << " l=" << s.l
        << " constraints=" << s.constraints << " vars=" << s.variables
        << " iters=" << s.iterations << " objective=" << Fixed(s.objective, 6)
        << " solve=" << Fixed(s.solve_seconds, 2) << "s\n";
  }
}

int ExitCodeFor(const RepairReport& report) {
  switch (report.status) {
    case RepairStatus::kSuccess:
      return 0;
    case RepairStatus::kInfeasible:
      return 2;
    case RepairStatus::kVerificationFailed:
      return 3;
    case RepairStatus::kNumericFailure:
      return 4;
    case RepairStatus::kInvalidPartition:
      return 1;
  }
  return 4;
}

int Overview(const DemoOptions& options, std::ostream& out) {
  Table t{out};
  out << "paper-overview\n";
  const RepairSpec points = toy::PointSpec();
  const RepairSpec polys = toy::PolytopeSpec();

  const VerifyReport v1 = CheckPolytope(toy::Dnn1(), points);
  t.Row("DNN1 violates the pointwise spec (0.25 > 0.1)",
        !v1.passed() && std::fabs(v1.items[0].witness_output[0] - 0.25) < 1e-12,
        "y(-1.5)=" + Fixed(toy::Dnn1().Forward(Point{-1.5})[0]));

  const RepairOutcome pw =
      PointwiseRepair(toy::Dnn1(), {{-1.5}, {-0.5}},
                      {points.items[0].psi, points.items[1].psi}, 0, options.repair);
  bool pw_ok = pw.network.has_value();
  std::string pw_detail = std::string(RepairStatusName(pw.report.status));
  if (pw_ok) {
    const double a = pw.network->Forward(Point{-1.5})[0];
    const double b = pw.network->Forward(Point{-0.5})[0];
    pw_ok = std::fabs(a) <= 0.1 + 1e-6 && std::fabs(b) <= 0.1 + 1e-6;
    pw_detail = "y(-1.5)=" + Fixed(a) + " y(-0.5)=" + Fixed(b);
  }
  t.Row("pointwise repair of DNN1 (k=0, s=[]) meets -0.1<=y<=0.1", pw_ok, pw_detail);

  t.Row("DNN2 satisfies the pointwise spec",
        CheckPointwise(toy::Dnn2(), {{-1.5}, {-0.5}}, {points.items[0].psi, points.items[1].psi})
            .passed());

  VerifyOptions vo;
  vo.samples = 256;
  const VerifyReport v3 = CheckPolytope(toy::Dnn3(), polys, vo);
  const ItemReport& p2 = v3.items[1];
  t.Row("DNN3 rejected on P2 with witness near x=2 (0.532 > 0.4)",
        p2.status == ItemStatus::kFailed && std::fabs(p2.witness_output[0] - 0.532) < 1e-3,
        "witness x=" + Fixed(p2.witness[0]) + " y=" + Fixed(p2.witness_output[0]));

  const bool lin = IsLocallyLinear(toy::Dnn4(), polys.items[0].polytope).locally_linear &&
                   IsLocallyLinear(toy::Dnn4(), polys.items[1].polytope).locally_linear &&
                   IsLocallyLinear(toy::Dnn1(), polys.items[0].polytope).locally_linear &&
                   !IsLocallyLinear(toy::Dnn1(), polys.items[1].polytope).locally_linear;
  t.Row("DNN4 locally linear on P1 and P2; DNN1 only on P1", lin);

  const RepairOutcome vp =
      VPolytopeRepair(toy::Dnn1(), polys, Partition::Parse("0:1"), 1, options.repair);
  const bool vp_ok = vp.network && CheckPolytope(*vp.network, polys, vo).all_certified() &&
                     CheckPolytope(toy::Dnn5(), polys, vo).all_certified();
  std::string vp_detail(RepairStatusName(vp.report.status));
  if (!vp.report.message.empty()) vp_detail += ": " + vp.report.message;
  t.Row("polytope repair of DNN1 (s=[(0,1)], k=1) certified; DNN5 too", vp_ok, vp_detail);
  PrintStages(out, vp.report);

  out << (t.failures == 0 ? "all golden checks passed\n" : "golden checks failed\n");
  return t.failures == 0 ? 0 : 3;
}

int RunScenario(const std::string& title, const Scenario& sc, const DemoOptions& options,
                std::ostream& out) {
  Table t{out};
  std::size_t vertices = 0;
  for (const SpecItem& item : sc.spec.items) vertices += item.polytope.num_vertices();
  out << title << ": " << sc.net.num_layers() << " layers, " << sc.net.num_parameters()
      << " parameters, " << sc.spec.items.size() << " polytopes, " << vertices
      << " vertices, s=[" << sc.partition.ToString() << "], k=" << sc.k << "\n";
  const VerifyReport before = CheckPolytope(sc.net, sc.spec);
  std::size_t failing = 0;
  for (const ItemReport& r : before.items) failing += r.status == ItemStatus::kCertified ? 0 : 1;
  out << "  original network: " << failing << " of " << before.items.size()
      << " polytopes not certified\n";

  const auto start = std::chrono::steady_clock::now();
  const RepairOutcome outcome = VPolytopeRepair(sc.net, sc.spec, sc.partition, sc.k, options.repair);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  PrintStages(out, outcome.report);
  t.Row("repair returned a network", outcome.network.has_value(),
        std::string(RepairStatusName(outcome.report.status)) + " in " + Fixed(secs, 1) + "s");
  if (!outcome.network) {
    out << "  " << outcome.report.message << "\n";
    return ExitCodeFor(outcome.report);
  }
  VerifyOptions vo;
  vo.samples = options.samples;
  vo.seed = options.seed;
  const VerifyReport after = CheckPolytope(*outcome.network, sc.spec, vo);
  std::size_t violations = 0;
  for (const ItemReport& r : after.items) violations += r.sample_violations;
  t.Row("every polytope certified", after.all_certified());
  t.Row("zero violations over " + std::to_string(options.samples) + " samples per polytope",
        violations == 0);
  t.Row("architecture preserved", outcome.network->SameArchitecture(sc.net));
  return t.failures == 0 ? 0 : 3;
}

}  // namespace

int RunDemo(std::string_view name, const DemoOptions& options, std::ostream& out) {
  if (name == "paper-overview") return Overview(options, out);
  if (name == "acas-desk") {
    return RunScenario("acas-desk", MakeAcasScenario(options.seed), options, out);
  }
  if (name == "robustbox-desk") {
    return RunScenario("robustbox-desk d=" + std::to_string(options.d),
                       MakeRobustBoxScenario(options.seed, options.d), options, out);
  }
  throw InputError("unknown demo '" + std::string(name) +
                   "' (expected paper-overview, acas-desk or robustbox-desk)");
}

}  // namespace polyrepair
