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

// Provable repair by linear programming.
//
// A stage picks a layer k, makes the first-layer weights and all biases of
// the suffix [k, L) symbolic and executes the suffix conditionally on the
// polytopes' images under the frozen prefix. The resulting LP keeps every
// neuron in the linear piece chosen by the polytope's reference point and
// asserts the output formula at every vertex; since the repaired suffix is
// then affine on each hull, the vertices certify the whole polytope.
//
// Polytope repair first runs "shift" stages over the partition: stage
// (k_i, l_i) re-solves layers [k_i, l_i) of the prefix [0, l_i) against the
// original prefix so that it becomes locally linear on every polytope. The
// final stage then asserts the specification at layer k.

#ifndef POLYREPAIR_REPAIR_H_
#define POLYREPAIR_REPAIR_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyrepair/lp.h"
#include "polyrepair/spec.h"
#include "polyrepair/verify.h"

namespace polyrepair {

// List of (k_i, l_i) shift stages.
struct Partition {
  std::vector<std::pair<std::size_t, std::size_t>> stages;

  // "k0:l0,k1:l1"; the empty string is the empty partition.
  static Partition Parse(std::string_view text);
  std::string ToString() const;
};

// nullopt when valid; otherwise a description of the first violated
// condition. Checks 0 <= k_i < l_i <= L, k_{i+1} <= l_i, k <= l_{n-1},
// k < L and local linearity of the original prefix [0, k_0) (or [0, k) when
// the partition is empty) on every polytope.
std::optional<std::string> ValidatePartition(const Network& net, const Partition& s,
                                             std::size_t k,
                                             const std::vector<VPolytope>& polytopes);

struct RepairOptions {
  RefStrategy ref_strategy = RefStrategy::kFirstVertex;
  // Distance kept from activation piece boundaries.
  double piece_margin = 1e-6;
  SolverOptions solver;
  // Re-check the local linearity precondition before every stage.
  bool debug_checks = false;
  // Write one CPLEX-LP file per stage into this directory when non-empty.
  std::string dump_lp_dir;
  VerifyOptions verify;
};

enum class RepairStatus {
  kSuccess,
  kInfeasible,
  kNumericFailure,
  kVerificationFailed,
  kInvalidPartition,
};

std::string_view RepairStatusName(RepairStatus status);

struct StageReport {
  std::string name;  // "shift[i]" or "final"
  std::size_t k = 0;  // symbolic layer
  std::size_t l = 0;  // end of the repaired slice
  SolveStatus solve_status = SolveStatus::kNumericFailure;
  std::string message;
  std::size_t vertices = 0;
  std::size_t symbolic_neurons = 0;     // neurons in layers [k, l)
  std::size_t activation_constraints = 0;
  std::size_t spec_constraints = 0;
  std::size_t objective_constraints = 0;
  std::size_t constraints = 0;
  std::size_t variables = 0;
  std::size_t parameters = 0;
  double objective = 0.0;
  long iterations = 0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct ParamEdit {
  ParamAddress address;
  double before = 0.0;
  double after = 0.0;
};

struct RepairReport {
  RepairStatus status = RepairStatus::kSuccess;
  std::string message;
  int failed_stage = -1;  // index into stages
  std::vector<StageReport> stages;
  std::vector<ParamEdit> edits;
  Partition partition;
  std::size_t k = 0;
  RepairOptions options;
  std::optional<VerifyReport> verification;
  double total_seconds = 0.0;

  // Sum over stages.
  std::size_t total_constraints() const;
};

struct RepairOutcome {
  std::optional<Network> network;  // set only on kSuccess
  RepairReport report;
};

// One stage. Layers [k, L) of `net` become symbolic. Output deltas are taken
// against `net_og` on the original polytopes, parameter deltas against the
// current values in `net`. Empty `psi` means the true formula.
struct StageOutcome {
  std::optional<Network> network;
  StageReport report;
};

StageOutcome ShiftAndAssert(const Network& net, const Network& net_og,
                            const std::vector<VPolytope>& polytopes,
                            const std::vector<OutputFormula>& psi, std::size_t k,
                            const RepairOptions& options = {});

RepairOutcome VPolytopeRepair(const Network& net, const RepairSpec& spec, const Partition& s,
                              std::size_t k, const RepairOptions& options = {});

// Singleton polytopes with the empty partition.
RepairOutcome PointwiseRepair(const Network& net, const std::vector<Point>& points,
                              const std::vector<OutputFormula>& psi, std::size_t k,
                              const RepairOptions& options = {});

// Parameters that differ between two networks of the same architecture.
std::vector<ParamEdit> DiffParameters(const Network& before, const Network& after);

}  // namespace polyrepair

#endif  // POLYREPAIR_REPAIR_H_
