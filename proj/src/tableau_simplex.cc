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

#include <cmath>
#include <unordered_map>

#include "polyrepair/lp.h"

namespace polyrepair {

namespace {

constexpr double kEps = 1e-11;

// Standard form: minimize c.y subject to A y = b, y >= 0, b >= 0.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }
  double& value() { return at(m_, n_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }

  void Pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
    }
    basis_[pr] = pc;
  }

  // Bland's rule over columns [0, allowed). Returns false when unbounded.
  bool Run(std::size_t allowed, long& iterations, long limit) {
    while (true) {
      if (limit > 0 && iterations >= limit) return true;
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < -kEps) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kEps) continue;
        const double ratio = rhs(r) / a;
        if (leave == m_ || ratio < best - kEps ||
            (ratio <= best + kEps && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      Pivot(leave, enter);
      ++iterations;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

class TableauSolver final : public LpSolver {
 public:
  std::string_view name() const override { return "tableau"; }

  SolveResult Solve(const LpProblem& problem, const SolverOptions& options) const override {
    SolveResult result;
    const std::size_t nvars = problem.variables.size();
    std::unordered_map<std::uint32_t, std::size_t> col_of;
    for (std::size_t i = 0; i < nvars; ++i) col_of.emplace(problem.variables[i].id.value, i);

    // x_i = offset_i + sum over its columns of sign * y.
    struct Map {
      double offset = 0.0;
      std::size_t col = 0;
      double sign = 1.0;
      bool split = false;
    };
    std::vector<Map> map(nvars);
    std::size_t ny = 0;
    struct Row {
      std::vector<std::pair<std::size_t, double>> coeffs;
      Relation rel;
      double rhs;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < nvars; ++i) {
      const LpVariable& v = problem.variables[i];
      Map& mp = map[i];
      mp.col = ny;
      if (std::isfinite(v.lower)) {
        mp.offset = v.lower;
        ++ny;
        if (std::isfinite(v.upper)) rows.push_back({{{mp.col, 1.0}}, Relation::kLe, v.upper - v.lower});
      } else if (std::isfinite(v.upper)) {
        mp.offset = v.upper;
        mp.sign = -1.0;
        ++ny;
      } else {
        mp.split = true;
        ny += 2;
      }
    }
    auto expand = [&](const AffineExpr& e, std::vector<std::pair<std::size_t, double>>& out) {
      double shift = e.constant();
      for (const auto& [id, coeff] : e.terms()) {
        const Map& mp = map[col_of.at(id.value)];
        shift += coeff * mp.offset;
        out.emplace_back(mp.col, coeff * mp.sign);
        if (mp.split) out.emplace_back(mp.col + 1, -coeff);
      }
      return shift;
    };
    for (const LinearConstraint& c : problem.constraints) {
      Row row{{}, c.rel, 0.0};
      row.rhs = c.rhs - expand(c.expr, row.coeffs);
      rows.push_back(std::move(row));
    }

    std::size_t nslack = 0;
    for (const Row& row : rows) nslack += row.rel == Relation::kEq ? 0 : 1;
    const std::size_t m = rows.size();
    const std::size_t first_art = ny + nslack;
    Tableau tab(m, first_art + m);
    std::size_t slack = ny;
    for (std::size_t r = 0; r < m; ++r) {
      const Row& row = rows[r];
      for (const auto& [col, coeff] : row.coeffs) tab.at(r, col) += coeff;
      if (row.rel == Relation::kLe) tab.at(r, slack++) = 1.0;
      if (row.rel == Relation::kGe) tab.at(r, slack++) = -1.0;
      tab.rhs(r) = row.rhs;
      if (row.rhs < 0.0) {
        for (std::size_t c = 0; c <= tab.cols(); ++c) tab.at(r, c) = -tab.at(r, c);
      }
      tab.at(r, first_art + r) = 1.0;
      tab.basis(r) = first_art + r;
    }

    // Phase 1: minimize the sum of artificials.
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c <= tab.cols(); ++c) {
        if (c < first_art || c == tab.cols()) tab.cost(c) -= tab.at(r, c);
      }
    }
    const long limit = options.max_iterations;
    tab.Run(tab.cols(), result.iterations, limit);
    if (-tab.value() > options.feas_tol) {
      result.status = SolveStatus::kInfeasible;
      result.message = "phase 1 optimum is positive";
      return result;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis(r) < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::fabs(tab.at(r, c)) > 1e-9) {
          tab.Pivot(r, c);
          break;
        }
      }
    }

    // Phase 2.
    std::vector<double> cost(tab.cols(), 0.0);
    std::vector<std::pair<std::size_t, double>> obj;
    expand(problem.objective, obj);
    for (const auto& [col, coeff] : obj) cost[col] += coeff;
    for (std::size_t c = 0; c <= tab.cols(); ++c) {
      tab.cost(c) = c < tab.cols() ? cost[c] : 0.0;
    }
    for (std::size_t r = 0; r < m; ++r) {
      const double cb = cost[tab.basis(r)];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= tab.cols(); ++c) tab.cost(c) -= cb * tab.at(r, c);
    }
    if (!tab.Run(first_art, result.iterations, limit)) {
      result.status = SolveStatus::kUnbounded;
      result.message = "objective unbounded below";
      return result;
    }
    if (limit > 0 && result.iterations >= limit) {
      result.message = "iteration limit reached";
      return result;
    }

    std::vector<double> y(tab.cols(), 0.0);
    for (std::size_t r = 0; r < m; ++r) y[tab.basis(r)] = tab.rhs(r);
    for (std::size_t i = 0; i < nvars; ++i) {
      const Map& mp = map[i];
      double x = mp.offset + mp.sign * y[mp.col];
      if (mp.split) x -= y[mp.col + 1];
      result.assignment.Set(problem.variables[i].id, x);
    }
    result.status = SolveStatus::kOptimal;
    result.objective = problem.objective.Evaluate(result.assignment);
    return result;
  }
};

}  // namespace

std::unique_ptr<LpSolver> MakeTableauSolver() { return std::make_unique<TableauSolver>(); }

}  // namespace polyrepair
