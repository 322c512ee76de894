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

// Affine expressions over network parameters, conjunctive linear formulas,
// and conditional symbolic execution of a network slice.
//
// Conditional execution pins every activation to the linear piece selected by
// a concrete reference point. The returned formula is the condition under
// which the symbolic output equals the real network output. Only the first
// layer of a slice has symbolic weights; all layers have symbolic biases, so
// every expression stays affine in the parameters.

#ifndef POLYREPAIR_SYMBOLIC_H_
#define POLYREPAIR_SYMBOLIC_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyrepair/network.h"

namespace polyrepair {

struct VarId {
  std::uint32_t value = 0;
  auto operator<=>(const VarId&) const = default;
};

// Allocates variable ids and remembers what each one stands for.
class VariableRegistry {
 public:
  struct Info {
    bool is_parameter = false;
    ParamAddress address;   // valid when is_parameter
    double original = 0.0;  // parameter value before repair
    std::string name;
  };

  VarId AddParameter(const ParamAddress& address, double original);
  VarId AddAuxiliary(std::string name);

  std::size_t size() const { return infos_.size(); }
  const Info& info(VarId id) const { return infos_.at(id.value); }
  std::string Name(VarId id) const;

 private:
  std::vector<Info> infos_;
};

// A (partial) valuation of variables.
class Assignment {
 public:
  Assignment() = default;

  void Set(VarId id, double value);
  bool IsBound(VarId id) const {
    return id.value < bound_.size() && bound_[id.value];
  }
  // Throws InputError for unbound variables.
  double Get(VarId id) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<double> values_;
  std::vector<bool> bound_;
};

// sum_i coeff_i * var_i + constant. Terms are kept sorted by variable id with
// no zero coefficients. There is deliberately no expression-times-expression
// operation.
class AffineExpr {
 public:
  using Term = std::pair<VarId, double>;

  // Coefficients smaller than this in magnitude are dropped.
  static constexpr double kDropThreshold = 1e-15;

  AffineExpr() = default;
  explicit AffineExpr(double constant) : constant_(constant) {}
  static AffineExpr Variable(VarId id, double coeff = 1.0);
  // Terms must be sorted by id and unique.
  static AffineExpr FromSortedTerms(std::vector<Term> terms, double constant);

  double constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool IsConstant() const { return terms_.empty(); }
  double Coefficient(VarId id) const;

  void AddTerm(VarId id, double coeff);
  void AddConstant(double c) { constant_ += c; }

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr& operator*=(double scale);

  double Evaluate(const Assignment& assignment) const;
  std::string ToString(const VariableRegistry* registry = nullptr) const;

  bool operator==(const AffineExpr&) const = default;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

AffineExpr operator+(AffineExpr a, const AffineExpr& b);
AffineExpr operator-(AffineExpr a, const AffineExpr& b);
AffineExpr operator*(double scale, AffineExpr a);

enum class Relation { kLe, kGe, kEq };

std::string_view RelationSymbol(Relation rel);

// expr (rel) rhs.
struct LinearConstraint {
  AffineExpr expr;
  Relation rel = Relation::kGe;
  double rhs = 0.0;

  static LinearConstraint Ge(AffineExpr e, double rhs) {
    return {std::move(e), Relation::kGe, rhs};
  }
  static LinearConstraint Le(AffineExpr e, double rhs) {
    return {std::move(e), Relation::kLe, rhs};
  }
  static LinearConstraint Eq(AffineExpr e, double rhs) {
    return {std::move(e), Relation::kEq, rhs};
  }

  // Non-negative iff satisfied; for equalities minus the absolute residual.
  double Slack(const Assignment& assignment) const;
  bool Holds(const Assignment& assignment, double tol) const {
    return Slack(assignment) >= -tol;
  }
  std::string ToString(const VariableRegistry* registry = nullptr) const;

  bool operator==(const LinearConstraint&) const = default;
};

// Conjunction of linear constraints; the empty formula is "true".
struct LinearFormula {
  std::vector<LinearConstraint> conjuncts;

  void Add(LinearConstraint c) { conjuncts.push_back(std::move(c)); }
  void And(const LinearFormula& other);
  std::size_t size() const { return conjuncts.size(); }
  bool empty() const { return conjuncts.empty(); }

  bool operator==(const LinearFormula&) const = default;
};

// True iff every conjunct holds with slack >= -tol.
bool Satisfies(const LinearFormula& formula, const Assignment& assignment,
               double tol);

using SymbolicPoint = std::vector<AffineExpr>;

Point Evaluate(const SymbolicPoint& point, const Assignment& assignment);

struct ConditionalOutput {
  SymbolicPoint output;
  LinearFormula formula;
};

// Piece selection for conditional activations. A reference value >= 0 picks
// the identity piece. `margin` tightens piece constraints away from the
// boundary (0 gives the plain non-strict pieces).
ConditionalOutput CondIdentity(const SymbolicPoint& x, std::span<const double> ref);
ConditionalOutput CondReLU(const SymbolicPoint& x, std::span<const double> ref,
                           double margin = 0.0);
ConditionalOutput CondHardswish(const SymbolicPoint& x, std::span<const double> ref,
                                double margin = 0.0);
ConditionalOutput CondActivation(Activation activation, const SymbolicPoint& x,
                                 std::span<const double> ref, double margin = 0.0);

// Variables for one network slice: every first-layer weight and every bias of
// every layer in the slice. Later weights stay concrete.
class SymbolicSlice {
 public:
  // `layer_offset` is the index of the slice's first layer in the full
  // network; recorded addresses refer to the full network.
  SymbolicSlice(Network slice, VariableRegistry& registry,
                std::size_t layer_offset = 0);

  const Network& network() const { return slice_; }
  std::size_t layer_offset() const { return layer_offset_; }

  VarId weight(std::size_t row, std::size_t col) const;
  VarId bias(std::size_t layer, std::size_t col) const;

  // All slice parameters in allocation order (weights, then biases by layer).
  const std::vector<VarId>& parameters() const { return parameters_; }
  std::size_t num_weight_vars() const {
    return slice_.layer(0).input_size() * slice_.layer(0).output_size();
  }
  std::size_t num_bias_vars() const { return parameters_.size() - num_weight_vars(); }

  VarId first_var() const { return parameters_.front(); }

 private:
  Network slice_;
  std::size_t layer_offset_;
  std::vector<VarId> parameters_;
  std::vector<std::size_t> bias_offsets_;
};

enum class RefStrategy { kFirstVertex, kCentroid };

std::string_view RefStrategyName(RefStrategy strategy);
RefStrategy ParseRefStrategy(std::string_view name);
Point CalcRef(const VPolytope& polytope, RefStrategy strategy);

// Conditional symbolic forward execution of one concrete input with the
// activation pieces chosen by the concrete trace of `ref` through the
// slice's current parameters.
ConditionalOutput CondForwardPoint(const SymbolicSlice& slice,
                                   std::span<const double> x,
                                   std::span<const double> ref,
                                   double margin = 0.0);

struct PolytopeConditionalOutput {
  std::vector<SymbolicPoint> outputs;  // one per vertex, in vertex order
  LinearFormula formula;
  Point reference;
};

// Runs CondForwardPoint on every vertex with one shared reference point.
PolytopeConditionalOutput CondForwardPolytope(const SymbolicSlice& slice,
                                              const VPolytope& polytope,
                                              RefStrategy strategy,
                                              double margin = 0.0);

// The assignment mapping every slice parameter to its current value.
Assignment OriginalAssignment(const SymbolicSlice& slice);

}  // namespace polyrepair

#endif  // POLYREPAIR_SYMBOLIC_H_
