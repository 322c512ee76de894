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

#include "polyrepair/verify.h"

#include <cmath>
#include <limits>
#include <random>

namespace polyrepair {

namespace {

bool Piece(Activation act, const std::vector<Point>& pre, std::size_t j, std::uint8_t& piece) {
  if (act == Activation::kIdentity) {
    piece = 1;
    return true;
  }
  const double hi = act == Activation::kReLU ? 0.0 : 3.0;
  const double lo = act == Activation::kReLU ? 0.0 : -3.0;
  bool all_upper = true;
  bool all_lower = true;
  for (const Point& z : pre) {
    if (z[j] < hi) all_upper = false;
    if (z[j] > lo) all_lower = false;
  }
  piece = all_upper ? 1 : 0;
  return all_upper || all_lower;
}

Point Blend(const Point& a, const Point& b, double lambda) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = (1.0 - lambda) * a[i] + lambda * b[i];
  return p;
}

}  // namespace

LinearityResult IsLocallyLinear(const Network& slice, const VPolytope& polytope) {
  if (polytope.dimension() != slice.input_size()) {
    throw InputError("polytope dimension " + std::to_string(polytope.dimension()) +
                     " does not match network input width " +
                     std::to_string(slice.input_size()));
  }
  LinearityResult result;
  std::vector<Point> current = polytope.vertices();
  for (std::size_t l = 0; l < slice.num_layers(); ++l) {
    const Layer& layer = slice.layer(l);
    std::vector<Point> pre;
    pre.reserve(current.size());
    for (const Point& x : current) pre.push_back(layer.PreActivation(x));
    std::vector<std::uint8_t> pieces(layer.output_size(), 1);
    for (std::size_t j = 0; j < layer.output_size(); ++j) {
      if (!Piece(layer.activation, pre, j, pieces[j])) {
        result.locally_linear = false;
        result.mixed_layer = l;
        result.mixed_neuron = j;
        return result;
      }
    }
    result.pieces.push_back(std::move(pieces));
    for (Point& z : pre) {
      for (double& v : z) v = Activate(layer.activation, v);
    }
    current = std::move(pre);
  }
  return result;
}

Point AffineMap::Apply(std::span<const double> x) const {
  Point y = b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += x[i] * a(i, j);
  }
  return y;
}

std::optional<AffineMap> LocalLinearMap(const Network& slice, const VPolytope& polytope) {
  const LinearityResult lin = IsLocallyLinear(slice, polytope);
  if (!lin.locally_linear) return std::nullopt;
  const std::size_t n = slice.input_size();
  AffineMap map{Matrix(n, n), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) map.a(i, i) = 1.0;
  for (std::size_t l = 0; l < slice.num_layers(); ++l) {
    const Layer& layer = slice.layer(l);
    const std::size_t m = layer.output_size();
    AffineMap next{Matrix(n, m), layer.bias};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < layer.input_size(); ++k) {
        const double aik = map.a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) next.a(i, j) += aik * layer.weights(k, j);
      }
    }
    for (std::size_t k = 0; k < layer.input_size(); ++k) {
      for (std::size_t j = 0; j < m; ++j) next.b[j] += map.b[k] * layer.weights(k, j);
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (lin.pieces[l][j]) continue;
      next.b[j] = 0.0;
      for (std::size_t i = 0; i < n; ++i) next.a(i, j) = 0.0;
    }
    map = std::move(next);
  }
  return map;
}

std::string_view ItemStatusName(ItemStatus status) {
  switch (status) {
    case ItemStatus::kCertified:
      return "certified";
    case ItemStatus::kSampledOnly:
      return "sampled-only";
    case ItemStatus::kFailed:
      return "failed";
  }
  return "failed";
}

bool VerifyReport::all_certified() const {
  for (const ItemReport& item : items) {
    if (item.status != ItemStatus::kCertified) return false;
  }
  return true;
}

bool VerifyReport::passed() const {
  for (const ItemReport& item : items) {
    if (item.status == ItemStatus::kFailed) return false;
  }
  return true;
}

VerifyReport CheckPolytope(const Network& net, const RepairSpec& spec,
                           const VerifyOptions& options) {
  spec.Validate(net);
  VerifyReport report;
  report.options = options;
  for (std::size_t index = 0; index < spec.items.size(); ++index) {
    const SpecItem& item = spec.items[index];
    const VPolytope& poly = item.polytope;
    ItemReport r;
    r.index = index;
    r.worst_slack = std::numeric_limits<double>::infinity();
    auto consider = [&](const Point& x) {
      Point y = net.Forward(x);
      const double slack = item.psi.Slack(y);
      if (slack < r.worst_slack || r.witness.empty()) {
        r.worst_slack = slack;
        r.witness = x;
        r.witness_output = std::move(y);
      }
      return slack;
    };

    r.vertices_ok = true;
    for (const Point& v : poly.vertices()) {
      if (consider(v) < -options.tol) r.vertices_ok = false;
    }
    const LinearityResult lin = IsLocallyLinear(net, poly);
    r.locally_linear = lin.locally_linear;
    r.mixed_layer = lin.mixed_layer;
    r.mixed_neuron = lin.mixed_neuron;

    if (poly.num_vertices() > 1) {
      std::mt19937_64 rng(options.seed * 1000003u + index);
      std::exponential_distribution<double> expo(1.0);
      std::vector<double> w(poly.num_vertices());
      for (std::size_t s = 0; s < options.samples; ++s) {
        double total = 0.0;
        for (double& wi : w) total += (wi = expo(rng));
        Point x(poly.dimension(), 0.0);
        for (std::size_t v = 0; v < w.size(); ++v) {
          const double lambda = w[v] / total;
          const Point& vert = poly.vertex(v);
          for (std::size_t i = 0; i < x.size(); ++i) x[i] += lambda * vert[i];
        }
        if (consider(x) < -options.tol) ++r.sample_violations;
      }
      r.samples = options.samples;
    }

    const bool violated = !r.vertices_ok || r.sample_violations > 0;
    if (violated && options.refine_witness && poly.num_vertices() > 1) {
      constexpr double kGolden = 0.6180339887498949;
      for (int round = 0; round < 3; ++round) {
        for (const Point& v : poly.vertices()) {
          const Point start = r.witness;
          double lo = 0.0, hi = 1.0;
          double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
          double f1 = consider(Blend(start, v, m1));
          double f2 = consider(Blend(start, v, m2));
          for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
              hi = m2, m2 = m1, f2 = f1;
              m1 = hi - kGolden * (hi - lo);
              f1 = consider(Blend(start, v, m1));
            } else {
              lo = m1, m1 = m2, f1 = f2;
              m2 = lo + kGolden * (hi - lo);
              f2 = consider(Blend(start, v, m2));
            }
          }
        }
      }
    }

    if (violated) {
      r.status = ItemStatus::kFailed;
    } else if (r.locally_linear) {
      r.status = ItemStatus::kCertified;
    } else {
      r.status = ItemStatus::kSampledOnly;
    }
    report.items.push_back(std::move(r));
  }
  return report;
}

VerifyReport CheckPointwise(const Network& net, const std::vector<Point>& points,
                            const std::vector<OutputFormula>& psi, double tol) {
  if (points.size() != psi.size()) {
    throw InputError("pointwise check: " + std::to_string(points.size()) + " points but " +
                     std::to_string(psi.size()) + " formulas");
  }
  RepairSpec spec;
  for (std::size_t i = 0; i < points.size(); ++i) {
    spec.items.push_back({VPolytope::Singleton(points[i]), psi[i]});
  }
  VerifyOptions options;
  options.tol = tol;
  options.samples = 0;
  return CheckPolytope(net, spec, options);
}

}  // namespace polyrepair
