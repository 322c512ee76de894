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

// Primal simplex over a row basis.
//
// A vertex is described by n active hyperplanes ("elements") whose normals
// form the basis matrix A_B; D = inv(A_B) is kept densely and its column j is
// the edge direction that lifts element j off its hyperplane while keeping
// the others active. Elements are coordinate hyperplanes through the start
// point (artificial; they may be dropped but never re-enter), constraint rows
// and the breakpoints of absolute-value terms w * |a.x - b|.
//
// Pairs of rows s >= e, s >= -e with s appearing only there and in the
// objective are folded into such terms before solving, which keeps the basis
// at the size of the non-auxiliary variables.
//
// Phase 1 minimizes the total violation of the rows; phase 2 treats rows as
// hard and minimizes the linear objective plus the absolute-value terms. The
// ratio test walks over breakpoints of the piecewise-linear objective along
// the edge until its slope turns non-negative or a hard row blocks.
// Offsets are perturbed by about 1e-9 while solving and restored for a
// final pass from the optimal basis.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "polyrepair/lp.h"

namespace polyrepair {

namespace {

constexpr double kPivotTol = 1e-10;     // |a.d| below this never blocks
constexpr double kZeroTol = 1e-11;      // residual treated as zero
constexpr double kHarrisTol = 1e-10;    // Harris ratio-test slack
constexpr double kPriceTol = 1e-11;     // steepest-edge improvement threshold
constexpr double kDegenerateStep = 1e-12;
constexpr int kBlandAfter = 30;
constexpr int kRefactorEvery = 100;
constexpr double kPerturb = 1e-9;       // rhs perturbation on scaled rows

enum class Kind : std::uint8_t { kArtificial, kGe, kEq, kAbs };

struct Element {
  Kind kind;
  std::vector<int> idx;
  std::vector<double> val;
  double rhs = 0.0;
  double weight = 0.0;  // kAbs only
};

// L1 auxiliary folded into an absolute-value term.
struct Folded {
  std::size_t problem_col;
  std::vector<std::pair<int, double>> coeffs;  // over core columns, unscaled
  double rhs;
};

struct Role {
  enum Type { kInactive, kFree, kHard, kFixed, kSoft } type;
  double alpha = 0.0;  // slope for residual < 0
  double beta = 0.0;   // slope for residual >= 0
};

struct Breakpoint {
  double t;
  int element;
  double increment;
};

class RowSimplex {
 public:
  RowSimplex(int n, std::vector<Element> elements, Eigen::VectorXd c, Eigen::VectorXd x0,
             long max_iterations)
      : n_(n),
        elements_(std::move(elements)),
        c_(std::move(c)),
        x_(std::move(x0)),
        max_iterations_(max_iterations) {
    const int e = static_cast<int>(elements_.size());
    pos_.assign(e, -1);
    dead_.assign(e, 0);
    side_.assign(e, 1);
    r_.assign(e, 0.0);
    ad_.assign(e, 0.0);
    basis_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      basis_[i] = i;
      pos_[i] = i;
    }
    d_ = Eigen::MatrixXd::Identity(n_, n_);
    RecomputeResiduals();
  }

  SolveStatus Run(std::string& message) {
    phase_ = 1;
    SolveStatus s = Optimize(message);
    if (s != SolveStatus::kOptimal) return s;
    if (!Refactor(message)) return SolveStatus::kNumericFailure;
    const double worst = MaxViolation();
    if (worst > infeasible_tol_) {
      std::ostringstream os;
      os << "phase 1 ended with scaled violation " << worst;
      message = os.str();
      return SolveStatus::kInfeasible;
    }
    phase_ = 2;
    degenerate_run_ = 0;
    s = Optimize(message);
    if (s != SolveStatus::kOptimal) return s;
    if (!Refactor(message)) return SolveStatus::kNumericFailure;
    Unperturb();
    return SolveStatus::kOptimal;
  }

  // Offsets inequality rows upward and absolute-value terms either way by
  // about kPerturb so degenerate vertices do not stall pricing.
  void Perturb() {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jitter(0.5 * kPerturb, kPerturb);
    original_rhs_.resize(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      Element& el = elements_[e];
      original_rhs_[e] = el.rhs;
      const double delta = jitter(rng);
      if (el.kind == Kind::kGe) el.rhs += delta;
      if (el.kind == Kind::kAbs) el.rhs += (rng() & 1) ? delta : -delta;
    }
    RecomputeResiduals();
  }

  void set_infeasible_tol(double tol) { infeasible_tol_ = tol; }
  const Eigen::VectorXd& x() const { return x_; }
  long iterations() const { return iterations_; }

 private:
  // Restores the original offsets and finishes phase 2 from the final basis.
  // Keeps the perturbed answer if that basis is not feasible afterwards.
  void Unperturb() {
    if (original_rhs_.empty()) return;
    const Eigen::VectorXd x_saved = x_;
    const std::vector<int> basis_saved = basis_, pos_saved = pos_;
    const std::vector<std::uint8_t> dead_saved = dead_;
    const std::vector<std::int8_t> side_saved = side_;
    const Eigen::MatrixXd d_saved = d_;
    const long iterations_saved = iterations_;
    std::vector<double> perturbed(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      perturbed[e] = elements_[e].rhs;
      elements_[e].rhs = original_rhs_[e];
    }
    std::string ignored;
    bool ok = Refactor(ignored) && MaxViolation() <= kZeroTol;
    if (ok) {
      degenerate_run_ = 0;
      const long limit = max_iterations_;
      max_iterations_ = iterations_ + n_ + 100;
      ok = Optimize(ignored) == SolveStatus::kOptimal && Refactor(ignored) &&
           MaxViolation() <= kZeroTol;
      max_iterations_ = limit;
    }
    if (ok) return;
    for (std::size_t e = 0; e < elements_.size(); ++e) elements_[e].rhs = perturbed[e];
    x_ = x_saved;
    basis_ = basis_saved;
    pos_ = pos_saved;
    dead_ = dead_saved;
    side_ = side_saved;
    d_ = d_saved;
    iterations_ = iterations_saved;
    RecomputeResiduals();
  }

  double MaxViolation() const {
    double worst = 0.0;
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      const Kind k = elements_[e].kind;
      if (k == Kind::kGe) worst = std::max(worst, -r_[e]);
      if (k == Kind::kEq) worst = std::max(worst, std::fabs(r_[e]));
    }
    return worst;
  }

  Role RoleOf(int e) const {
    const Element& el = elements_[e];
    switch (el.kind) {
      case Kind::kArtificial:
        return {dead_[e] ? Role::kInactive : Role::kFree};
      case Kind::kGe:
        if (phase_ == 1) return {Role::kSoft, -1.0, 0.0};
        return {Role::kHard};
      case Kind::kEq:
        if (phase_ == 1) return {Role::kSoft, -1.0, 1.0};
        return {Role::kFixed};
      case Kind::kAbs:
        if (phase_ == 1) return {Role::kInactive};
        return {Role::kSoft, -el.weight, el.weight};
    }
    return {Role::kInactive};
  }

  // Which linear piece of a soft element applies at x: +1 for the
  // residual >= 0 piece. Elements sitting on their kink keep the piece they
  // were last moved onto.
  int Side(int e) const {
    if (r_[e] > kZeroTol) return 1;
    if (r_[e] < -kZeroTol) return -1;
    return side_[e];
  }

  double Dot(const Element& el, const Eigen::VectorXd& v) const {
    double s = 0.0;
    for (std::size_t k = 0; k < el.idx.size(); ++k) s += el.val[k] * v[el.idx[k]];
    return s;
  }

  void RecomputeResiduals() {
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      r_[e] = Dot(elements_[e], x_) - elements_[e].rhs;
    }
  }

  bool Refactor(std::string& message) {
    if (n_ == 0) return true;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    Eigen::VectorXd b(n_);
    for (int j = 0; j < n_; ++j) {
      const Element& el = elements_[basis_[j]];
      for (std::size_t k = 0; k < el.idx.size(); ++k) a(j, el.idx[k]) = el.val[k];
      b[j] = el.rhs;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      message = "singular basis during refactorization";
      return false;
    }
    d_ = lu.inverse();
    x_ = d_ * b;
    RecomputeResiduals();
    since_refactor_ = 0;
    return true;
  }

  Eigen::VectorXd Gradient() const {
    Eigen::VectorXd g = phase_ == 2 ? c_ : Eigen::VectorXd::Zero(n_);
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      if (pos_[e] >= 0) continue;
      const Role role = RoleOf(static_cast<int>(e));
      if (role.type != Role::kSoft) continue;
      const double slope = Side(static_cast<int>(e)) > 0 ? role.beta : role.alpha;
      if (slope == 0.0) continue;
      const Element& el = elements_[e];
      for (std::size_t k = 0; k < el.idx.size(); ++k) g[el.idx[k]] += slope * el.val[k];
    }
    return g;
  }

  SolveStatus Optimize(std::string& message) {
    while (true) {
      if (max_iterations_ > 0 && iterations_ >= max_iterations_) {
        message = "iteration limit reached";
        return SolveStatus::kNumericFailure;
      }
      if (since_refactor_ >= kRefactorEvery && !Refactor(message)) {
        return SolveStatus::kNumericFailure;
      }

      // Pricing.
      const Eigen::VectorXd g = Gradient();
      const Eigen::VectorXd mu = d_.transpose() * g;
      const bool bland = degenerate_run_ >= kBlandAfter;
      int best_pos = -1;
      int best_sign = 0;
      double best_score = 0.0;
      double best_rate = 0.0;
      for (int j = 0; j < n_; ++j) {
        const int e = basis_[j];
        const Role role = RoleOf(e);
        double up = std::numeric_limits<double>::infinity();
        double down = std::numeric_limits<double>::infinity();
        switch (role.type) {
          case Role::kFree:
            up = mu[j];
            down = -mu[j];
            break;
          case Role::kSoft:
            up = mu[j] + role.beta;
            down = -mu[j] - role.alpha;
            break;
          case Role::kHard:
            up = mu[j];
            break;
          default:
            break;
        }
        const double norm = d_.col(j).norm();
        if (norm == 0.0) continue;
        const int sign = up <= down ? 1 : -1;
        const double rate = std::min(up, down);
        const double score = rate / norm;
        if (score >= -kPriceTol) continue;
        if (bland) {
          if (best_pos < 0 || e < basis_[best_pos]) {
            best_pos = j, best_sign = sign, best_score = score, best_rate = rate;
          }
        } else if (best_pos < 0 || score < best_score) {
          best_pos = j, best_sign = sign, best_score = score, best_rate = rate;
        }
      }
      if (best_pos < 0) return SolveStatus::kOptimal;

      // Normalized edge direction.
      Eigen::VectorXd dir = best_sign * d_.col(best_pos);
      const double scale = dir.cwiseAbs().maxCoeff();
      dir /= scale;
      const double rate0 = best_rate / scale;

      // Ratio test.
      const int leaving = basis_[best_pos];
      int blocker = -1;
      double block_t = std::numeric_limits<double>::infinity();
      {
        double harris = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < elements_.size(); ++e) {
          const Role role = RoleOf(static_cast<int>(e));
          if (role.type == Role::kInactive) {
            ad_[e] = 0.0;
            continue;
          }
          ad_[e] = Dot(elements_[e], dir);
          if (pos_[e] >= 0) continue;
          const double ad = ad_[e];
          if (role.type == Role::kHard && ad < -kPivotTol) {
            harris = std::min(harris, (std::max(r_[e], 0.0) + kHarrisTol) / -ad);
          } else if (role.type == Role::kFixed && std::fabs(ad) > kPivotTol) {
            harris = std::min(harris, kHarrisTol / std::fabs(ad));
          }
        }
        double best_ad = 0.0;
        for (std::size_t e = 0; e < elements_.size(); ++e) {
          if (pos_[e] >= 0) continue;
          const Role role = RoleOf(static_cast<int>(e));
          const double ad = ad_[e];
          double t;
          if (role.type == Role::kHard && ad < -kPivotTol) {
            t = std::max(r_[e], 0.0) / -ad;
          } else if (role.type == Role::kFixed && std::fabs(ad) > kPivotTol) {
            t = 0.0;
          } else {
            continue;
          }
          if (t > harris) continue;
          const bool better = bland ? blocker < 0 || t < block_t ||
                                          (t == block_t && static_cast<int>(e) < blocker)
                                    : std::fabs(ad) > best_ad;
          if (better) {
            blocker = static_cast<int>(e);
            block_t = t;
            best_ad = std::fabs(ad);
          }
        }
      }

      breakpoints_.clear();
      for (std::size_t e = 0; e < elements_.size(); ++e) {
        if (pos_[e] >= 0) continue;
        const Role role = RoleOf(static_cast<int>(e));
        if (role.type != Role::kSoft) continue;
        const double ad = ad_[e];
        const int side = Side(static_cast<int>(e));
        double t;
        if (side > 0 && ad < -kPivotTol) {
          t = std::max(r_[e], 0.0) / -ad;
        } else if (side < 0 && ad > kPivotTol) {
          t = std::max(-r_[e], 0.0) / ad;
        } else {
          continue;
        }
        if (t > block_t) continue;
        breakpoints_.push_back({t, static_cast<int>(e), (role.beta - role.alpha) * std::fabs(ad)});
      }
      std::sort(breakpoints_.begin(), breakpoints_.end(),
                [](const Breakpoint& a, const Breakpoint& b) {
                  return a.t < b.t || (a.t == b.t && a.element < b.element);
                });
      int entering = -1;
      double step = 0.0;
      double rate = rate0;
      std::size_t crossed = 0;
      for (const Breakpoint& bp : breakpoints_) {
        rate += bp.increment;
        if (rate >= -1e-14) {
          entering = bp.element;
          step = bp.t;
          break;
        }
        ++crossed;
      }
      if (entering < 0) {
        if (blocker < 0) {
          if (phase_ == 1) {
            message = "phase 1 found a descent ray";
            return SolveStatus::kNumericFailure;
          }
          message = "objective unbounded below";
          return SolveStatus::kUnbounded;
        }
        entering = blocker;
        step = block_t;
      }

      // Move.
      if (step > 0.0) {
        x_ += step * dir;
        for (std::size_t e = 0; e < elements_.size(); ++e) r_[e] += step * ad_[e];
      }
      r_[entering] = 0.0;
      for (std::size_t b = 0; b < crossed && b < breakpoints_.size(); ++b) {
        const int e = breakpoints_[b].element;
        side_[e] = ad_[e] > 0.0 ? 1 : -1;
      }
      side_[leaving] = static_cast<std::int8_t>(best_sign);
      degenerate_run_ = step <= kDegenerateStep ? degenerate_run_ + 1 : 0;

      // Basis exchange.
      const Element& in = elements_[entering];
      Eigen::VectorXd w = Eigen::VectorXd::Zero(n_);
      for (std::size_t k = 0; k < in.idx.size(); ++k) w += in.val[k] * d_.row(in.idx[k]).transpose();
      const double wp = w[best_pos];
      if (std::fabs(wp) < 1e-13 * d_.col(best_pos).cwiseAbs().maxCoeff()) {
        if (!Refactor(message)) return SolveStatus::kNumericFailure;
        message = "near-singular pivot";
        return SolveStatus::kNumericFailure;
      }
      d_.col(best_pos) /= wp;
      const Eigen::VectorXd dp = d_.col(best_pos);
      for (int j = 0; j < n_; ++j) {
        if (j != best_pos && w[j] != 0.0) d_.col(j) -= w[j] * dp;
      }
      basis_[best_pos] = entering;
      pos_[entering] = best_pos;
      pos_[leaving] = -1;
      if (elements_[leaving].kind == Kind::kArtificial) dead_[leaving] = 1;
      ++iterations_;
      ++since_refactor_;
    }
  }

  int n_;
  std::vector<Element> elements_;
  Eigen::VectorXd c_;
  Eigen::VectorXd x_;
  long max_iterations_;

  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<std::uint8_t> dead_;
  std::vector<std::int8_t> side_;
  std::vector<double> r_;
  std::vector<double> ad_;
  std::vector<Breakpoint> breakpoints_;
  Eigen::MatrixXd d_;
  int phase_ = 1;
  int degenerate_run_ = 0;
  int since_refactor_ = 0;
  long iterations_ = 0;
  double infeasible_tol_ = 1e-8;
  std::vector<double> original_rhs_;
};

// A constraint as  sum coeff * col  (>= or =)  rhs over problem columns.
struct RawRow {
  bool equality;
  std::vector<std::pair<int, double>> coeffs;  // sorted by column
  double rhs;
};

class RowSimplexSolver final : public LpSolver {
 public:
  std::string_view name() const override { return "row-simplex"; }

  SolveResult Solve(const LpProblem& problem, const SolverOptions& options) const override {
    SolveResult result;
    const int nvars = static_cast<int>(problem.variables.size());
    std::unordered_map<std::uint32_t, int> col_of;
    for (int i = 0; i < nvars; ++i) col_of.emplace(problem.variables[i].id.value, i);

    // Normalize rows to ">=" or "=".
    std::vector<RawRow> rows;
    rows.reserve(problem.constraints.size() + 2 * nvars);
    for (const LinearConstraint& c : problem.constraints) {
      RawRow row;
      row.equality = c.rel == Relation::kEq;
      const double sign = c.rel == Relation::kLe ? -1.0 : 1.0;
      for (const auto& [id, coeff] : c.expr.terms()) {
        row.coeffs.emplace_back(col_of.at(id.value), sign * coeff);
      }
      std::sort(row.coeffs.begin(), row.coeffs.end());
      row.rhs = sign * (c.rhs - c.expr.constant());
      rows.push_back(std::move(row));
    }
    for (int i = 0; i < nvars; ++i) {
      const LpVariable& v = problem.variables[i];
      if (std::isfinite(v.lower)) rows.push_back({false, {{i, 1.0}}, v.lower});
      if (std::isfinite(v.upper)) rows.push_back({false, {{i, -1.0}}, -v.upper});
    }

    std::vector<double> obj(nvars, 0.0);
    for (const auto& [id, coeff] : problem.objective.terms()) obj[col_of.at(id.value)] = coeff;

    // Find L1 auxiliaries.
    std::vector<std::vector<int>> rows_of(nvars);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      for (const auto& [col, coeff] : rows[r].coeffs) rows_of[col].push_back(r);
    }
    std::vector<char> candidate(nvars, 0);
    for (int v = 0; v < nvars; ++v) {
      const LpVariable& var = problem.variables[v];
      if (obj[v] < 0.0 || var.lower > 0.0 || std::isfinite(var.upper)) continue;
      // A lower bound of 0 shows up as a third row; allow it.
      std::vector<int> rs;
      for (int r : rows_of[v]) {
        if (rows[r].coeffs.size() == 1 && std::isfinite(var.lower)) continue;
        rs.push_back(r);
      }
      if (rs.size() != 2) continue;
      const RawRow& a = rows[rs[0]];
      const RawRow& b = rows[rs[1]];
      if (a.equality || b.equality || a.coeffs.size() != b.coeffs.size()) continue;
      bool ok = true;
      double sa = 0.0, sb = 0.0;
      for (std::size_t k = 0; k < a.coeffs.size() && ok; ++k) {
        if (a.coeffs[k].first != b.coeffs[k].first) ok = false;
        if (a.coeffs[k].first == v) sa = a.coeffs[k].second, sb = b.coeffs[k].second;
      }
      if (!ok || sa <= 0.0 || sb <= 0.0) continue;
      for (std::size_t k = 0; k < a.coeffs.size() && ok; ++k) {
        if (a.coeffs[k].first == v) continue;
        if (a.coeffs[k].second / sa != -(b.coeffs[k].second / sb)) ok = false;
      }
      if (!ok || a.rhs / sa != -(b.rhs / sb)) continue;
      candidate[v] = 1;
    }
    std::vector<char> folded(nvars, 0);
    std::vector<char> row_used(rows.size(), 0);
    std::vector<Folded> folds;
    std::vector<double> fold_weight;
    for (int v = 0; v < nvars; ++v) {
      if (!candidate[v]) continue;
      std::vector<int> rs;
      for (int r : rows_of[v]) {
        if (rows[r].coeffs.size() == 1 && std::isfinite(problem.variables[v].lower)) continue;
        rs.push_back(r);
      }
      bool clash = row_used[rs[0]] || row_used[rs[1]];
      for (const auto& [col, coeff] : rows[rs[0]].coeffs) {
        if (col != v && candidate[col]) clash = true;
      }
      if (clash) continue;
      folded[v] = 1;
      row_used[rs[0]] = row_used[rs[1]] = 1;
      for (int r : rows_of[v]) row_used[r] = 1;  // includes the bound row
      const RawRow& a = rows[rs[0]];
      double sa = 0.0;
      for (const auto& [col, coeff] : a.coeffs) {
        if (col == v) sa = coeff;
      }
      Folded f{static_cast<std::size_t>(v), {}, a.rhs / sa};
      for (const auto& [col, coeff] : a.coeffs) {
        if (col != v) f.coeffs.emplace_back(col, coeff / sa);
      }
      folds.push_back(std::move(f));
      fold_weight.push_back(obj[v]);
    }

    // Core columns.
    std::vector<int> core_of(nvars, -1);
    std::vector<int> problem_of;
    for (int v = 0; v < nvars; ++v) {
      if (!folded[v]) {
        core_of[v] = static_cast<int>(problem_of.size());
        problem_of.push_back(v);
      }
    }
    const int n = static_cast<int>(problem_of.size());

    std::vector<Element> elements;
    elements.reserve(n + rows.size() + folds.size());
    for (int i = 0; i < n; ++i) {
      elements.push_back({Kind::kArtificial, {i}, {1.0}, problem.variables[problem_of[i]].start});
    }
    auto add_scaled = [&](Kind kind, const std::vector<std::pair<int, double>>& coeffs,
                          double rhs, double weight) -> bool {
      Element el{kind, {}, {}, rhs, weight};
      double big = 0.0;
      for (const auto& [col, coeff] : coeffs) {
        el.idx.push_back(core_of[col]);
        el.val.push_back(coeff);
        big = std::max(big, std::fabs(coeff));
      }
      if (big == 0.0) return false;
      for (double& v : el.val) v /= big;
      el.rhs /= big;
      el.weight *= big;
      elements.push_back(std::move(el));
      return true;
    };
    const double tol = options.feas_tol;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (row_used[r]) continue;
      const RawRow& row = rows[r];
      if (!add_scaled(row.equality ? Kind::kEq : Kind::kGe, row.coeffs, row.rhs, 0.0)) {
        const bool ok = row.equality ? std::fabs(row.rhs) <= tol : row.rhs <= tol;
        if (!ok) {
          result.status = SolveStatus::kInfeasible;
          result.message = "constant constraint " + std::to_string(r) + " is violated";
          return result;
        }
      }
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
      add_scaled(Kind::kAbs, folds[f].coeffs, folds[f].rhs, fold_weight[f]);
    }
    Eigen::VectorXd c(n), x0(n);
    for (int i = 0; i < n; ++i) {
      c[i] = obj[problem_of[i]];
      x0[i] = problem.variables[problem_of[i]].start;
    }
    const long limit = options.max_iterations > 0
                           ? options.max_iterations
                           : 50L * static_cast<long>(elements.size()) + 10000L;
    RowSimplex simplex(n, std::move(elements), std::move(c), std::move(x0), limit);
    simplex.set_infeasible_tol(std::min(1e-8, 0.1 * tol));
    simplex.Perturb();
    result.status = simplex.Run(result.message);
    result.iterations = simplex.iterations();
    if (result.status != SolveStatus::kOptimal) return result;

    const Eigen::VectorXd& x = simplex.x();
    for (int i = 0; i < n; ++i) result.assignment.Set(problem.variables[problem_of[i]].id, x[i]);
    for (const Folded& f : folds) {
      double e = -f.rhs;
      for (const auto& [col, coeff] : f.coeffs) e += coeff * x[core_of[col]];
      result.assignment.Set(problem.variables[f.problem_col].id, std::fabs(e));
    }
    result.objective = problem.objective.Evaluate(result.assignment);
    return result;
  }
};

}  // namespace

std::unique_ptr<LpSolver> MakeRowSimplexSolver() {
  return std::make_unique<RowSimplexSolver>();
}

}  // namespace polyrepair
