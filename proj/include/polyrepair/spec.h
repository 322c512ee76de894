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

#ifndef POLYREPAIR_SPEC_H_
#define POLYREPAIR_SPEC_H_

#include <optional>
#include <string_view>
#include <vector>

#include "polyrepair/network.h"
#include "polyrepair/symbolic.h"

namespace polyrepair {

enum class ClassMode { kArgmax, kArgmin };

std::string_view ClassModeName(ClassMode mode);
ClassMode ParseClassMode(std::string_view name);

// Index of the largest (argmax) or smallest (argmin) entry; ties go to the
// lowest index.
std::size_t ArgExtreme(std::span<const double> y, ClassMode mode);

// sum_j coeffs[j] * y_j (rel) rhs over network outputs.
struct OutputConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::kLe;
  double rhs = 0.0;
};

// A linear formula over network outputs: either raw constraints or a
// classification requirement that desugars to pairwise comparisons.
class OutputFormula {
 public:
  static constexpr double kDefaultMargin = 1e-4;

  struct Classify {
    std::size_t label = 0;
    ClassMode mode = ClassMode::kArgmax;
    double margin = kDefaultMargin;
  };

  OutputFormula() = default;  // true
  static OutputFormula Raw(std::vector<OutputConstraint> constraints);
  static OutputFormula Class(std::size_t label, ClassMode mode,
                             double margin = kDefaultMargin);
  // lower <= y_index <= upper.
  static OutputFormula Bounds(std::size_t num_outputs, std::size_t index, double lower,
                              double upper);

  bool is_classify() const { return classify_.has_value(); }
  const std::optional<Classify>& classify() const { return classify_; }
  const std::vector<OutputConstraint>& raw() const { return raw_; }

  // Raw constraints this formula stands for on an m-output network. Throws
  // InputError on width or label mismatches.
  std::vector<OutputConstraint> Desugar(std::size_t num_outputs) const;

  // Minimum constraint slack at y (equalities count -|residual|); +infinity
  // for the true formula.
  double Slack(std::span<const double> y) const;
  bool Holds(std::span<const double> y, double tol) const { return Slack(y) >= -tol; }

  // The formula applied to a symbolic output.
  LinearFormula Apply(const SymbolicPoint& y) const;

 private:
  std::vector<OutputConstraint> raw_;
  std::optional<Classify> classify_;
};

struct SpecItem {
  VPolytope polytope;
  OutputFormula psi;
};

// Pointwise specifications are the special case of singleton polytopes.
struct RepairSpec {
  std::vector<SpecItem> items;

  // Throws InputError unless every vertex has the network's input width and
  // every formula fits its output width.
  void Validate(const Network& net) const;
  std::vector<VPolytope> polytopes() const;
  std::vector<OutputFormula> formulas() const;
};

}  // namespace polyrepair

#endif  // POLYREPAIR_SPEC_H_
