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

#include "polyrepair/repair.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polyrepair {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::size_t ParseIndex(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  if (text.empty()) throw InputError("malformed partition '" + std::string(whole) + "'");
  for (char c : text) {
    if (c < '0' || c > '9') throw InputError("malformed partition '" + std::string(whole) + "'");
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

RepairStatus FromSolve(SolveStatus status) {
  return status == SolveStatus::kInfeasible ? RepairStatus::kInfeasible
                                            : RepairStatus::kNumericFailure;
}

Network Splice(const Network& head, const Network& full, std::size_t from) {
  std::vector<Layer> layers = head.layers();
  for (std::size_t l = from; l < full.num_layers(); ++l) layers.push_back(full.layer(l));
  return Network(std::move(layers));
}

}  // namespace

Partition Partition::Parse(std::string_view text) {
  Partition p;
  text = Trim(text);
  if (text.empty()) return p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = Trim(text.substr(start, comma - start));
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InputError("malformed partition '" + std::string(text) + "'");
    }
    p.stages.emplace_back(ParseIndex(Trim(item.substr(0, colon)), text),
                          ParseIndex(Trim(item.substr(colon + 1)), text));
    start = comma + 1;
  }
  return p;
}

std::string Partition::ToString() const {
  std::string out;
  for (const auto& [k, l] : stages) {
    if (!out.empty()) out += ",";
    out += std::to_string(k) + ":" + std::to_string(l);
  }
  return out;
}

std::optional<std::string> ValidatePartition(const Network& net, const Partition& s,
                                             std::size_t k,
                                             const std::vector<VPolytope>& polytopes) {
  const std::size_t num_layers = net.num_layers();
  std::ostringstream os;
  if (k >= num_layers) {
    os << "repair layer k=" << k << " must be below the layer count " << num_layers;
    return os.str();
  }
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    const auto [ki, li] = s.stages[i];
    if (!(ki < li && li <= num_layers)) {
      os << "stage " << i << " (" << ki << "," << li << ") violates 0 <= k_i < l_i <= "
         << num_layers;
      return os.str();
    }
    if (i > 0 && ki > s.stages[i - 1].second) {
      os << "stage " << i << " starts at k_i=" << ki << " after the previous end l="
         << s.stages[i - 1].second;
      return os.str();
    }
  }
  if (!s.stages.empty() && k > s.stages.back().second) {
    os << "repair layer k=" << k << " lies beyond the last shifted layer l="
       << s.stages.back().second;
    return os.str();
  }
  const std::size_t prefix_end = s.stages.empty() ? k : s.stages.front().first;
  if (prefix_end > 0) {
    const Network prefix = net.Slice(0, prefix_end);
    for (std::size_t p = 0; p < polytopes.size(); ++p) {
      const LinearityResult lin = IsLocallyLinear(prefix, polytopes[p]);
      if (!lin.locally_linear) {
        os << "layers [0," << prefix_end << ") are not locally linear on polytope " << p
           << " (layer " << lin.mixed_layer << ", neuron " << lin.mixed_neuron << ")";
        return os.str();
      }
    }
  }
  return std::nullopt;
}

std::string_view RepairStatusName(RepairStatus status) {
  switch (status) {
    case RepairStatus::kSuccess:
      return "success";
    case RepairStatus::kInfeasible:
      return "infeasible";
    case RepairStatus::kNumericFailure:
      return "numeric_failure";
    case RepairStatus::kVerificationFailed:
      return "verification_failed";
    case RepairStatus::kInvalidPartition:
      return "invalid_partition";
  }
  return "numeric_failure";
}

std::size_t RepairReport::total_constraints() const {
  std::size_t total = 0;
  for (const StageReport& s : stages) total += s.constraints;
  return total;
}

namespace {

// `name` labels the stage report and its LP dump file.
StageOutcome RunStage(const Network& net, const Network& net_og,
                      const std::vector<VPolytope>& polytopes,
                      const std::vector<OutputFormula>& psi, std::size_t k,
                      const RepairOptions& options, const std::string& name) {
  const auto build_start = Clock::now();
  const std::size_t num_layers = net.num_layers();
  if (k >= num_layers) throw InputError("repair layer out of range");
  if (!net.SameArchitecture(net_og)) {
    throw InputError("reference network differs in architecture");
  }
  if (!psi.empty() && psi.size() != polytopes.size()) {
    throw InputError("one output formula per polytope is required");
  }

  StageOutcome out;
  StageReport& report = out.report;
  report.name = name;
  report.k = k;
  report.l = num_layers;
  for (std::size_t l = k; l < num_layers; ++l) report.symbolic_neurons += net.layer(l).output_size();

  // Polytopes as seen by layer k.
  std::vector<VPolytope> shifted;
  shifted.reserve(polytopes.size());
  if (k == 0) {
    shifted = polytopes;
  } else {
    const Network prefix = net.Slice(0, k);
    for (const VPolytope& p : polytopes) {
      if (options.debug_checks && !IsLocallyLinear(prefix, p).locally_linear) {
        throw InputError("precondition violated: layers [0," + std::to_string(k) +
                         ") are not locally linear on a polytope");
      }
      shifted.push_back(ForwardPolytope(prefix, p));
    }
  }

  VariableRegistry registry;
  const SymbolicSlice slice(net.Slice(k, num_layers), registry, k);
  LpProblem problem;
  std::vector<SymbolicPoint> outputs;
  std::vector<Point> targets;
  for (std::size_t p = 0; p < shifted.size(); ++p) {
    PolytopeConditionalOutput cond =
        CondForwardPolytope(slice, shifted[p], options.ref_strategy, options.piece_margin);
    report.activation_constraints += cond.formula.size();
    for (LinearConstraint& c : cond.formula.conjuncts) problem.constraints.push_back(std::move(c));
    for (std::size_t v = 0; v < cond.outputs.size(); ++v) {
      if (!psi.empty()) {
        LinearFormula f = psi[p].Apply(cond.outputs[v]);
        report.spec_constraints += f.size();
        for (LinearConstraint& c : f.conjuncts) problem.constraints.push_back(std::move(c));
      }
      outputs.push_back(std::move(cond.outputs[v]));
      targets.push_back(net_og.Forward(polytopes[p].vertex(v)));
    }
    report.vertices += shifted[p].num_vertices();
  }

  const Assignment current = OriginalAssignment(slice);
  std::vector<std::pair<VarId, double>> params;
  for (VarId id : slice.parameters()) params.emplace_back(id, current.Get(id));
  DeltaObjective delta = BuildDeltaObjective(outputs, targets, params, registry);
  report.objective_constraints = delta.constraints.size();
  for (LinearConstraint& c : delta.constraints) problem.constraints.push_back(std::move(c));
  problem.objective = delta.objective;

  double linf = 0.0;
  std::vector<double> start_abs;
  start_abs.reserve(delta.deltas.size());
  for (const AffineExpr& d : delta.deltas) {
    start_abs.push_back(std::fabs(d.Evaluate(current)));
    linf = std::max(linf, start_abs.back());
  }
  for (const auto& [id, value] : params) problem.AddVariable(id, -kInfinity, kInfinity, value);
  problem.AddVariable(delta.linf, -kInfinity, kInfinity, linf);
  for (std::size_t i = 0; i < delta.l1.size(); ++i) {
    problem.AddVariable(delta.l1[i], -kInfinity, kInfinity, start_abs[i]);
  }
  report.parameters = params.size();
  report.variables = problem.variables.size();
  report.constraints = problem.constraints.size();
  report.build_seconds = Seconds(build_start);

  if (!options.dump_lp_dir.empty()) {
    std::filesystem::create_directories(options.dump_lp_dir);
    std::string stem = name;
    std::replace(stem.begin(), stem.end(), '[', '-');
    std::erase(stem, ']');
    const std::string file = options.dump_lp_dir + "/" + stem + "-k" + std::to_string(k) +
                             "-l" + std::to_string(num_layers) + ".lp";
    std::ofstream(file) << ToLpFormat(problem, &registry);
  }

  const auto solve_start = Clock::now();
  SolveResult result = Solve(problem, options.solver);
  report.solve_seconds = Seconds(solve_start);
  report.solve_status = result.status;
  report.message = result.message;
  report.iterations = result.iterations;
  if (result.status != SolveStatus::kOptimal) return out;
  report.objective = result.objective;

  Network repaired = net;
  for (VarId id : slice.parameters()) {
    repaired.SetParameter(registry.info(id).address, result.assignment.Get(id));
  }
  out.network = std::move(repaired);
  return out;
}

}  // namespace

StageOutcome ShiftAndAssert(const Network& net, const Network& net_og,
                            const std::vector<VPolytope>& polytopes,
                            const std::vector<OutputFormula>& psi, std::size_t k,
                            const RepairOptions& options) {
  return RunStage(net, net_og, polytopes, psi, k, options, "stage");
}

RepairOutcome VPolytopeRepair(const Network& net, const RepairSpec& spec, const Partition& s,
                              std::size_t k, const RepairOptions& options) {
  const auto start = Clock::now();
  spec.Validate(net);
  RepairOutcome out;
  RepairReport& report = out.report;
  report.partition = s;
  report.k = k;
  report.options = options;
  const std::vector<VPolytope> polytopes = spec.polytopes();

  if (auto violation = ValidatePartition(net, s, k, polytopes)) {
    report.status = RepairStatus::kInvalidPartition;
    report.message = *violation;
    report.total_seconds = Seconds(start);
    return out;
  }
  if (spec.items.empty()) {
    out.network = net;
    report.total_seconds = Seconds(start);
    return out;
  }

  Network current = net;
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    const auto [ki, li] = s.stages[i];
    StageOutcome stage = RunStage(current.Slice(0, li), net.Slice(0, li), polytopes, {}, ki,
                                  options, "shift[" + std::to_string(i) + "]");
    report.stages.push_back(stage.report);
    if (!stage.network) {
      report.status = FromSolve(stage.report.solve_status);
      report.failed_stage = static_cast<int>(i);
      report.message = "stage " + stage.report.name + ": " +
                       std::string(SolveStatusName(stage.report.solve_status));
      if (!stage.report.message.empty()) report.message += " (" + stage.report.message + ")";
      report.total_seconds = Seconds(start);
      return out;
    }
    current = Splice(*stage.network, current, li);
  }

  StageOutcome final_stage =
      RunStage(current, net, polytopes, spec.formulas(), k, options, "final");
  report.stages.push_back(final_stage.report);
  if (!final_stage.network) {
    report.status = FromSolve(final_stage.report.solve_status);
    report.failed_stage = static_cast<int>(report.stages.size() - 1);
    report.message = "final stage: " +
                     std::string(SolveStatusName(final_stage.report.solve_status));
    if (!final_stage.report.message.empty()) report.message += " (" + final_stage.report.message + ")";
    report.total_seconds = Seconds(start);
    return out;
  }

  const Network& repaired = *final_stage.network;
  report.verification = CheckPolytope(repaired, spec, options.verify);
  if (!report.verification->all_certified()) {
    report.status = RepairStatus::kVerificationFailed;
    report.message = "repaired network failed independent verification";
    report.total_seconds = Seconds(start);
    return out;
  }
  report.edits = DiffParameters(net, repaired);
  out.network = repaired;
  report.total_seconds = Seconds(start);
  return out;
}

RepairOutcome PointwiseRepair(const Network& net, const std::vector<Point>& points,
                              const std::vector<OutputFormula>& psi, std::size_t k,
                              const RepairOptions& options) {
  if (points.size() != psi.size()) {
    throw InputError("pointwise repair: " + std::to_string(points.size()) + " points but " +
                     std::to_string(psi.size()) + " formulas");
  }
  RepairSpec spec;
  for (std::size_t i = 0; i < points.size(); ++i) {
    spec.items.push_back({VPolytope::Singleton(points[i]), psi[i]});
  }
  return VPolytopeRepair(net, spec, Partition{}, k, options);
}

std::vector<ParamEdit> DiffParameters(const Network& before, const Network& after) {
  if (!before.SameArchitecture(after)) throw InputError("networks differ in architecture");
  std::vector<ParamEdit> edits;
  for (std::size_t l = 0; l < before.num_layers(); ++l) {
    const Layer& a = before.layer(l);
    const Layer& b = after.layer(l);
    for (std::size_t r = 0; r < a.input_size(); ++r) {
      for (std::size_t c = 0; c < a.output_size(); ++c) {
        if (a.weights(r, c) != b.weights(r, c)) {
          edits.push_back({ParamAddress::Weight(l, r, c), a.weights(r, c), b.weights(r, c)});
        }
      }
    }
    for (std::size_t c = 0; c < a.output_size(); ++c) {
      if (a.bias[c] != b.bias[c]) edits.push_back({ParamAddress::Bias(l, c), a.bias[c], b.bias[c]});
    }
  }
  return edits;
}

}  // namespace polyrepair
