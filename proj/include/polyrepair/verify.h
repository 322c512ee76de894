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

// Independent checks of repaired networks.
//
// A network restricted to the convex hull of a V-polytope is affine exactly
// when every piecewise neuron keeps all vertex pre-activations inside one
// closed linear piece; by induction the pre-activations of the next layer
// are then affine in the input as well. Vertices plus local linearity
// therefore certify a linear output formula on the whole hull.

#ifndef POLYREPAIR_VERIFY_H_
#define POLYREPAIR_VERIFY_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "polyrepair/network.h"
#include "polyrepair/spec.h"

namespace polyrepair {

struct LinearityResult {
  bool locally_linear = true;
  // First neuron whose vertices straddle a piece boundary (when not linear).
  std::size_t mixed_layer = 0;
  std::size_t mixed_neuron = 0;
  // pieces[l][j]: 1 for the upper piece (identity part), 0 for the lower
  // piece (constant part); identity neurons are always 1. Filled for the
  // layers before the mixed one.
  std::vector<std::vector<std::uint8_t>> pieces;
};

// Exact, sample-free decision. Boundaries are closed: a ReLU neuron with
// values in {0} and [0, inf) counts as linear, as does Hardswish at +-3.
LinearityResult IsLocallyLinear(const Network& slice, const VPolytope& polytope);

// y = x * A + b on the polytope's hull; A is n_in x n_out.
struct AffineMap {
  Matrix a;
  std::vector<double> b;

  Point Apply(std::span<const double> x) const;
};

// nullopt when the slice is not locally linear on the polytope.
std::optional<AffineMap> LocalLinearMap(const Network& slice, const VPolytope& polytope);

enum class ItemStatus { kCertified, kSampledOnly, kFailed };

std::string_view ItemStatusName(ItemStatus status);

struct ItemReport {
  std::size_t index = 0;
  ItemStatus status = ItemStatus::kFailed;
  bool vertices_ok = false;
  bool locally_linear = false;
  std::size_t mixed_layer = 0;
  std::size_t mixed_neuron = 0;
  std::size_t samples = 0;
  std::size_t sample_violations = 0;
  // Smallest formula slack seen over vertices and samples.
  double worst_slack = 0.0;
  Point witness;         // input attaining worst_slack
  Point witness_output;  // network output at the witness
};

struct VerifyOptions {
  std::size_t samples = 256;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  // Line searches that push a violating witness towards the worst point.
  bool refine_witness = true;
};

struct VerifyReport {
  std::vector<ItemReport> items;
  VerifyOptions options;

  bool all_certified() const;
  // Every item certified or sampled without violations.
  bool passed() const;
};

VerifyReport CheckPolytope(const Network& net, const RepairSpec& spec,
                           const VerifyOptions& options = {});

// Formula check at the given points only.
VerifyReport CheckPointwise(const Network& net, const std::vector<Point>& points,
                            const std::vector<OutputFormula>& psi, double tol = 1e-6);

}  // namespace polyrepair

#endif  // POLYREPAIR_VERIFY_H_
