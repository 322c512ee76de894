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

#include "polyrepair/spec.h"

#include <cmath>
#include <limits>

namespace polyrepair {

std::string_view ClassModeName(ClassMode mode) {
  return mode == ClassMode::kArgmax ? "argmax" : "argmin";
}

ClassMode ParseClassMode(std::string_view name) {
  if (name == "argmax") return ClassMode::kArgmax;
  if (name == "argmin") return ClassMode::kArgmin;
  throw InputError("unknown classification mode '" + std::string(name) + "'");
}

std::size_t ArgExtreme(std::span<const double> y, ClassMode mode) {
  if (y.empty()) throw InputError("argmax/argmin of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (mode == ClassMode::kArgmax ? y[i] > y[best] : y[i] < y[best]) best = i;
  }
  return best;
}

OutputFormula OutputFormula::Raw(std::vector<OutputConstraint> constraints) {
  OutputFormula f;
  f.raw_ = std::move(constraints);
  return f;
}

OutputFormula OutputFormula::Class(std::size_t label, ClassMode mode, double margin) {
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw InputError("classification margin must be finite and non-negative");
  }
  OutputFormula f;
  f.classify_ = Classify{label, mode, margin};
  return f;
}

OutputFormula OutputFormula::Bounds(std::size_t num_outputs, std::size_t index,
                                    double lower, double upper) {
  std::vector<double> coeffs(num_outputs, 0.0);
  coeffs.at(index) = 1.0;
  return Raw({{coeffs, Relation::kGe, lower}, {coeffs, Relation::kLe, upper}});
}

std::vector<OutputConstraint> OutputFormula::Desugar(std::size_t num_outputs) const {
  if (!classify_) {
    for (const OutputConstraint& c : raw_) {
      if (c.coeffs.size() != num_outputs) {
        throw InputError("output constraint has " + std::to_string(c.coeffs.size()) +
                         " coefficients for a network with " +
                         std::to_string(num_outputs) + " outputs");
      }
    }
    return raw_;
  }
  const Classify& c = *classify_;
  if (c.label >= num_outputs) {
    throw InputError("label " + std::to_string(c.label) + " out of range for " +
                     std::to_string(num_outputs) + " outputs");
  }
  // argmax: y_label - y_j >= margin; argmin: y_label - y_j <= -margin.
  std::vector<OutputConstraint> out;
  for (std::size_t j = 0; j < num_outputs; ++j) {
    if (j == c.label) continue;
    OutputConstraint oc;
    oc.coeffs.assign(num_outputs, 0.0);
    oc.coeffs[c.label] = 1.0;
    oc.coeffs[j] = -1.0;
    if (c.mode == ClassMode::kArgmax) {
      oc.rel = Relation::kGe;
      oc.rhs = c.margin;
    } else {
      oc.rel = Relation::kLe;
      oc.rhs = -c.margin;
    }
    out.push_back(std::move(oc));
  }
  return out;
}

double OutputFormula::Slack(std::span<const double> y) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const OutputConstraint& c : Desugar(y.size())) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) lhs += c.coeffs[j] * y[j];
    double slack;
    switch (c.rel) {
      case Relation::kLe:
        slack = c.rhs - lhs;
        break;
      case Relation::kGe:
        slack = lhs - c.rhs;
        break;
      default:
        slack = -std::fabs(lhs - c.rhs);
        break;
    }
    worst = std::min(worst, slack);
  }
  return worst;
}

LinearFormula OutputFormula::Apply(const SymbolicPoint& y) const {
  LinearFormula f;
  for (const OutputConstraint& c : Desugar(y.size())) {
    AffineExpr e;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (c.coeffs[j] != 0.0) e += c.coeffs[j] * y[j];
    }
    const double k = e.constant();
    e.AddConstant(-k);
    f.Add({std::move(e), c.rel, c.rhs - k});
  }
  return f;
}

void RepairSpec::Validate(const Network& net) const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].polytope.dimension() != net.input_size()) {
      throw InputError("spec item " + std::to_string(i) + " has vertices of dimension " +
                       std::to_string(items[i].polytope.dimension()) +
                       ", network input width is " + std::to_string(net.input_size()));
    }
    items[i].psi.Desugar(net.output_size());
  }
}

std::vector<VPolytope> RepairSpec::polytopes() const {
  std::vector<VPolytope> out;
  out.reserve(items.size());
  for (const SpecItem& item : items) out.push_back(item.polytope);
  return out;
}

std::vector<OutputFormula> RepairSpec::formulas() const {
  std::vector<OutputFormula> out;
  out.reserve(items.size());
  for (const SpecItem& item : items) out.push_back(item.psi);
  return out;
}

}  // namespace polyrepair
