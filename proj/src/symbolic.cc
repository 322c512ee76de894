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

#include "polyrepair/symbolic.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polyrepair {

namespace {

bool Negligible(double c) { return std::fabs(c) < AffineExpr::kDropThreshold; }

void CheckSameDim(const SymbolicPoint& x, std::span<const double> ref) {
  if (x.size() != ref.size()) {
    throw InputError("symbolic point has dimension " + std::to_string(x.size()) +
                     " but reference has " + std::to_string(ref.size()));
  }
}

}  // namespace

VarId VariableRegistry::AddParameter(const ParamAddress& address, double original) {
  Info info;
  info.is_parameter = true;
  info.address = address;
  info.original = original;
  info.name = address.ToString();
  infos_.push_back(std::move(info));
  return VarId{static_cast<std::uint32_t>(infos_.size() - 1)};
}

VarId VariableRegistry::AddAuxiliary(std::string name) {
  Info info;
  info.name = std::move(name);
  infos_.push_back(std::move(info));
  return VarId{static_cast<std::uint32_t>(infos_.size() - 1)};
}

std::string VariableRegistry::Name(VarId id) const {
  if (id.value < infos_.size()) return infos_[id.value].name;
  return "v" + std::to_string(id.value);
}

void Assignment::Set(VarId id, double value) {
  if (id.value >= values_.size()) {
    values_.resize(id.value + 1, 0.0);
    bound_.resize(id.value + 1, false);
  }
  values_[id.value] = value;
  bound_[id.value] = true;
}

double Assignment::Get(VarId id) const {
  if (!IsBound(id)) {
    throw InputError("variable v" + std::to_string(id.value) + " is unbound");
  }
  return values_[id.value];
}

AffineExpr AffineExpr::Variable(VarId id, double coeff) {
  AffineExpr e;
  if (!Negligible(coeff)) e.terms_.emplace_back(id, coeff);
  return e;
}

AffineExpr AffineExpr::FromSortedTerms(std::vector<Term> terms, double constant) {
  AffineExpr e;
  e.constant_ = constant;
  e.terms_ = std::move(terms);
  std::erase_if(e.terms_, [](const Term& t) { return Negligible(t.second); });
  return e;
}

double AffineExpr::Coefficient(VarId id) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                             [](const Term& t, VarId v) { return t.first < v; });
  return it != terms_.end() && it->first == id ? it->second : 0.0;
}

void AffineExpr::AddTerm(VarId id, double coeff) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                             [](const Term& t, VarId v) { return t.first < v; });
  if (it != terms_.end() && it->first == id) {
    it->second += coeff;
    if (Negligible(it->second)) terms_.erase(it);
  } else if (!Negligible(coeff)) {
    terms_.insert(it, {id, coeff});
  }
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      const double c = a->second + b->second;
      if (!Negligible(c)) merged.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  constant_ += other.constant_;
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) {
  AffineExpr negated = other;
  negated *= -1.0;
  return *this += negated;
}

AffineExpr& AffineExpr::operator*=(double scale) {
  for (Term& t : terms_) t.second *= scale;
  constant_ *= scale;
  std::erase_if(terms_, [](const Term& t) { return Negligible(t.second); });
  return *this;
}

double AffineExpr::Evaluate(const Assignment& assignment) const {
  double value = 0.0;
  for (const auto& [id, coeff] : terms_) value += coeff * assignment.Get(id);
  return value + constant_;
}

std::string AffineExpr::ToString(const VariableRegistry* registry) const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [id, coeff] : terms_) {
    if (!first) os << (coeff < 0 ? " - " : " + ");
    else if (coeff < 0) os << "-";
    first = false;
    const double mag = std::fabs(coeff);
    if (mag != 1.0) os << mag << "*";
    os << (registry ? registry->Name(id) : "v" + std::to_string(id.value));
  }
  if (first) {
    os << constant_;
  } else if (constant_ != 0.0) {
    os << (constant_ < 0 ? " - " : " + ") << std::fabs(constant_);
  }
  return os.str();
}

AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
AffineExpr operator*(double scale, AffineExpr a) { return a *= scale; }

std::string_view RelationSymbol(Relation rel) {
  switch (rel) {
    case Relation::kLe:
      return "<=";
    case Relation::kGe:
      return ">=";
    case Relation::kEq:
      return "=";
  }
  return "=";
}

double LinearConstraint::Slack(const Assignment& assignment) const {
  const double value = expr.Evaluate(assignment);
  switch (rel) {
    case Relation::kLe:
      return rhs - value;
    case Relation::kGe:
      return value - rhs;
    case Relation::kEq:
      return -std::fabs(value - rhs);
  }
  return 0.0;
}

std::string LinearConstraint::ToString(const VariableRegistry* registry) const {
  std::ostringstream os;
  os.precision(17);
  os << expr.ToString(registry) << " " << RelationSymbol(rel) << " " << rhs;
  return os.str();
}

void LinearFormula::And(const LinearFormula& other) {
  conjuncts.insert(conjuncts.end(), other.conjuncts.begin(), other.conjuncts.end());
}

bool Satisfies(const LinearFormula& formula, const Assignment& assignment, double tol) {
  return std::all_of(formula.conjuncts.begin(), formula.conjuncts.end(),
                     [&](const LinearConstraint& c) { return c.Holds(assignment, tol); });
}

Point Evaluate(const SymbolicPoint& point, const Assignment& assignment) {
  Point out;
  out.reserve(point.size());
  for (const AffineExpr& e : point) out.push_back(e.Evaluate(assignment));
  return out;
}

ConditionalOutput CondIdentity(const SymbolicPoint& x, std::span<const double> ref) {
  CheckSameDim(x, ref);
  return {x, LinearFormula{}};
}

ConditionalOutput CondReLU(const SymbolicPoint& x, std::span<const double> ref,
                           double margin) {
  CheckSameDim(x, ref);
  ConditionalOutput result;
  result.output.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (ref[i] >= 0.0) {
      result.output.push_back(x[i]);
      result.formula.Add(LinearConstraint::Ge(x[i], margin));
    } else {
      result.output.emplace_back(0.0);
      result.formula.Add(LinearConstraint::Le(x[i], -margin));
    }
  }
  return result;
}

ConditionalOutput CondHardswish(const SymbolicPoint& x, std::span<const double> ref,
                                double margin) {
  CheckSameDim(x, ref);
  ConditionalOutput result;
  result.output.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (ref[i] >= 0.0) {
      result.output.push_back(x[i]);
      result.formula.Add(LinearConstraint::Ge(x[i], 3.0 + margin));
    } else {
      result.output.emplace_back(0.0);
      result.formula.Add(LinearConstraint::Le(x[i], -3.0 - margin));
    }
  }
  return result;
}

ConditionalOutput CondActivation(Activation activation, const SymbolicPoint& x,
                                 std::span<const double> ref, double margin) {
  switch (activation) {
    case Activation::kIdentity:
      return CondIdentity(x, ref);
    case Activation::kReLU:
      return CondReLU(x, ref, margin);
    case Activation::kHardswish:
      return CondHardswish(x, ref, margin);
  }
  return CondIdentity(x, ref);
}

SymbolicSlice::SymbolicSlice(Network slice, VariableRegistry& registry,
                             std::size_t layer_offset)
    : slice_(std::move(slice)), layer_offset_(layer_offset) {
  const Layer& first = slice_.layer(0);
  for (std::size_t i = 0; i < first.input_size(); ++i) {
    for (std::size_t j = 0; j < first.output_size(); ++j) {
      parameters_.push_back(registry.AddParameter(
          ParamAddress::Weight(layer_offset, i, j), first.weights(i, j)));
    }
  }
  for (std::size_t l = 0; l < slice_.num_layers(); ++l) {
    bias_offsets_.push_back(parameters_.size());
    const Layer& layer = slice_.layer(l);
    for (std::size_t j = 0; j < layer.output_size(); ++j) {
      parameters_.push_back(
          registry.AddParameter(ParamAddress::Bias(layer_offset + l, j), layer.bias[j]));
    }
  }
}

VarId SymbolicSlice::weight(std::size_t row, std::size_t col) const {
  const Layer& first = slice_.layer(0);
  if (row >= first.input_size() || col >= first.output_size()) {
    throw InputError("symbolic weight index out of range");
  }
  return parameters_[row * first.output_size() + col];
}

VarId SymbolicSlice::bias(std::size_t layer, std::size_t col) const {
  if (layer >= slice_.num_layers() || col >= slice_.layer(layer).output_size()) {
    throw InputError("symbolic bias index out of range");
  }
  return parameters_[bias_offsets_[layer] + col];
}

std::string_view RefStrategyName(RefStrategy strategy) {
  return strategy == RefStrategy::kFirstVertex ? "first-vertex" : "centroid";
}

RefStrategy ParseRefStrategy(std::string_view name) {
  if (name == "first-vertex") return RefStrategy::kFirstVertex;
  if (name == "centroid") return RefStrategy::kCentroid;
  throw InputError("unknown reference strategy '" + std::string(name) + "'");
}

Point CalcRef(const VPolytope& polytope, RefStrategy strategy) {
  return strategy == RefStrategy::kFirstVertex ? polytope.vertex(0) : polytope.Centroid();
}

ConditionalOutput CondForwardPoint(const SymbolicSlice& slice, std::span<const double> x,
                                   std::span<const double> ref, double margin) {
  const Network& net = slice.network();
  if (x.size() != net.input_size() || ref.size() != net.input_size()) {
    throw InputError("conditional forward: input/reference dimension mismatch with slice "
                     "input width " + std::to_string(net.input_size()));
  }
  // Variables of one slice are allocated contiguously, so a dense scratch
  // buffer indexed by (id - first) accumulates linear combinations.
  const std::uint32_t first = slice.first_var().value;
  const std::size_t num_vars = slice.parameters().size();
  std::vector<double> scratch(num_vars, 0.0);

  ConditionalOutput result;
  Point ref_current(ref.begin(), ref.end());
  SymbolicPoint current;

  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const Layer& layer = net.layer(l);
    const std::size_t n_out = layer.output_size();
    SymbolicPoint pre(n_out);
    if (l == 0) {
      for (std::size_t j = 0; j < n_out; ++j) {
        std::vector<AffineExpr::Term> terms;
        terms.reserve(x.size() + 1);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] != 0.0) terms.emplace_back(slice.weight(i, j), x[i]);
        }
        terms.emplace_back(slice.bias(0, j), 1.0);
        pre[j] = AffineExpr::FromSortedTerms(std::move(terms), 0.0);
      }
    } else {
      for (std::size_t j = 0; j < n_out; ++j) {
        std::fill(scratch.begin(), scratch.end(), 0.0);
        double constant = 0.0;
        for (std::size_t i = 0; i < current.size(); ++i) {
          const double w = layer.weights(i, j);
          if (w == 0.0) continue;
          for (const auto& [id, coeff] : current[i].terms()) {
            scratch[id.value - first] += w * coeff;
          }
          constant += w * current[i].constant();
        }
        scratch[slice.bias(l, j).value - first] += 1.0;
        std::vector<AffineExpr::Term> terms;
        for (std::size_t v = 0; v < num_vars; ++v) {
          if (scratch[v] != 0.0) {
            terms.emplace_back(VarId{static_cast<std::uint32_t>(first + v)}, scratch[v]);
          }
        }
        pre[j] = AffineExpr::FromSortedTerms(std::move(terms), constant);
      }
    }
    Point ref_pre = layer.PreActivation(ref_current);
    ConditionalOutput step = CondActivation(layer.activation, pre, ref_pre, margin);
    result.formula.And(step.formula);
    current = std::move(step.output);
    for (double& v : ref_pre) v = Activate(layer.activation, v);
    ref_current = std::move(ref_pre);
  }
  result.output = std::move(current);
  return result;
}

PolytopeConditionalOutput CondForwardPolytope(const SymbolicSlice& slice,
                                              const VPolytope& polytope,
                                              RefStrategy strategy, double margin) {
  if (polytope.dimension() != slice.network().input_size()) {
    throw InputError("polytope dimension " + std::to_string(polytope.dimension()) +
                     " does not match slice input width " +
                     std::to_string(slice.network().input_size()));
  }
  PolytopeConditionalOutput result;
  result.reference = CalcRef(polytope, strategy);
  result.outputs.reserve(polytope.num_vertices());
  for (const Point& v : polytope.vertices()) {
    ConditionalOutput out = CondForwardPoint(slice, v, result.reference, margin);
    result.outputs.push_back(std::move(out.output));
    result.formula.And(out.formula);
  }
  return result;
}

Assignment OriginalAssignment(const SymbolicSlice& slice) {
  Assignment a;
  const Network& net = slice.network();
  const Layer& first = net.layer(0);
  for (std::size_t i = 0; i < first.input_size(); ++i) {
    for (std::size_t j = 0; j < first.output_size(); ++j) {
      a.Set(slice.weight(i, j), first.weights(i, j));
    }
  }
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    for (std::size_t j = 0; j < net.layer(l).output_size(); ++j) {
      a.Set(slice.bias(l, j), net.layer(l).bias[j]);
    }
  }
  return a;
}

}  // namespace polyrepair
