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

// Command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 infeasible repair,
// 3 verification failure, 4 numeric failure.

#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "polyrepair/demo.h"
#include "polyrepair/io.h"

namespace {

using namespace polyrepair;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerify = 3;
constexpr int kExitNumeric = 4;

struct RepairArgs {
  std::string network, spec, partition, out, report, dump_lp, ref = "first-vertex";
  std::string backend = "row-simplex", lp_command;
  std::size_t k = 0;
  double margin = 1e-6;
  double feas_tol = 1e-7;
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  bool debug = false;
};

struct VerifyArgs {
  std::string network, spec, report;
  std::size_t samples = 256;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string network, baseline, dataset, mode = "argmax", report;
};

struct DemoArgs {
  std::string name;
  std::uint64_t seed = 1;
  std::size_t d = 5;
  std::size_t samples = 10000;
  std::string backend = "row-simplex";
};

int RunRepair(const RepairArgs& a) {
  const Network net = LoadNetwork(a.network);
  const RepairSpec spec = LoadSpec(a.spec);
  RepairOptions options;
  options.ref_strategy = ParseRefStrategy(a.ref);
  options.piece_margin = a.margin;
  options.solver.feas_tol = a.feas_tol;
  options.solver.backend = ParseBackend(a.backend);
  options.solver.external_command = a.lp_command;
  options.dump_lp_dir = a.dump_lp;
  options.debug_checks = a.debug;
  options.verify.samples = a.samples;
  options.verify.seed = a.seed;
  const RepairOutcome outcome =
      VPolytopeRepair(net, spec, Partition::Parse(a.partition), a.k, options);
  const RepairReport& r = outcome.report;
  if (!a.report.empty()) WriteFile(a.report, RepairReportToJson(r).dump(2) + "\n");

  std::cout << "status: " << RepairStatusName(r.status) << "\n";
  for (const StageReport& s : r.stages) {
    std::cout << "  " << s.name << ": k=" << s.k << " constraints=" << s.constraints
              << " variables=" << s.variables << " " << SolveStatusName(s.solve_status)
              << " objective=" << s.objective << "\n";
  }
  if (!r.message.empty()) std::cout << r.message << "\n";
  switch (r.status) {
    case RepairStatus::kSuccess:
      if (!a.out.empty()) SaveNetwork(a.out, *outcome.network);
      std::cout << r.edits.size() << " parameters changed\n";
      return kExitOk;
    case RepairStatus::kInfeasible:
      return kExitInfeasible;
    case RepairStatus::kVerificationFailed:
      return kExitVerify;
    case RepairStatus::kNumericFailure:
      return kExitNumeric;
    case RepairStatus::kInvalidPartition:
      return kExitInput;
  }
  return kExitNumeric;
}

int RunVerify(const VerifyArgs& a) {
  const Network net = LoadNetwork(a.network);
  const RepairSpec spec = LoadSpec(a.spec);
  VerifyOptions options;
  options.samples = a.samples;
  options.tol = a.tol;
  options.seed = a.seed;
  const VerifyReport report = CheckPolytope(net, spec, options);
  if (!a.report.empty()) WriteFile(a.report, VerifyReportToJson(report).dump(2) + "\n");
  for (const ItemReport& item : report.items) {
    std::cout << "item " << item.index << ": " << ItemStatusName(item.status);
    if (item.status == ItemStatus::kFailed) {
      std::cout << " witness x=[";
      for (std::size_t i = 0; i < item.witness.size(); ++i) {
        std::cout << (i ? ", " : "") << item.witness[i];
      }
      std::cout << "] y=[";
      for (std::size_t i = 0; i < item.witness_output.size(); ++i) {
        std::cout << (i ? ", " : "") << item.witness_output[i];
      }
      std::cout << "]";
    }
    std::cout << "\n";
  }
  std::cout << (report.passed() ? "verification passed" : "verification failed") << "\n";
  return report.passed() ? kExitOk : kExitVerify;
}

int RunEval(const EvalArgs& a) {
  const Network net = LoadNetwork(a.network);
  const Dataset data = LoadDataset(a.dataset, ParseClassMode(a.mode));
  const double acc = Accuracy(net, data);
  nlohmann::json j = {{"tool_version", kVersion},
                      {"mode", a.mode},
                      {"rows", data.size()},
                      {"accuracy", acc}};
  std::cout << "accuracy: " << acc << "\n";
  if (!a.baseline.empty()) {
    const Network base = LoadNetwork(a.baseline);
    const double draw = Drawdown(base, net, data);
    const double gen = Generalization(base, net, data);
    j["baseline_accuracy"] = Accuracy(base, data);
    j["drawdown"] = draw;
    j["generalization"] = gen;
    std::cout << "baseline accuracy: " << j["baseline_accuracy"].get<double>() << "\n"
              << "drawdown: " << draw << "\n"
              << "generalization: " << gen << "\n";
  }
  if (!a.report.empty()) WriteFile(a.report, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Provable repair of feedforward networks over V-polytopes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(polyrepair::kVersion));

  RepairArgs ra;
  CLI::App* repair = app.add_subcommand("repair", "Repair a network against a specification");
  repair->add_option("--network", ra.network, "Network JSON")->required()->check(CLI::ExistingFile);
  repair->add_option("--spec", ra.spec, "Specification JSON")->required()->check(CLI::ExistingFile);
  repair->add_option("--partition", ra.partition,
                     "Shift stages \"k0:l0,k1:l1,...\"; none when omitted");
  repair->add_option("--k", ra.k, "Layer whose weights are repaired")->required();
  repair->add_option("--ref-strategy", ra.ref, "Reference point choice")
      ->check(CLI::IsMember({"first-vertex", "centroid"}));
  repair->add_option("--out", ra.out, "Where to write the repaired network");
  repair->add_option("--report", ra.report, "Where to write the JSON report");
  repair->add_option("--dump-lp", ra.dump_lp, "Directory for per-stage LP files");
  repair->add_option("--margin", ra.margin, "Distance kept from activation boundaries")
      ->check(CLI::NonNegativeNumber);
  repair->add_option("--feas-tol", ra.feas_tol, "LP feasibility tolerance")
      ->check(CLI::PositiveNumber);
  repair->add_option("--lp-backend", ra.backend, "row-simplex, tableau or external")
      ->check(CLI::IsMember({"row-simplex", "tableau", "external"}));
  repair->add_option("--lp-command", ra.lp_command, "Command for the external backend");
  repair->add_option("--samples", ra.samples, "Hull samples in the final check");
  repair->add_option("--seed", ra.seed, "Sampling seed");
  repair->add_flag("--debug-checks", ra.debug, "Re-check stage preconditions");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Check a network against a specification");
  verify->add_option("--network", va.network, "Network JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--spec", va.spec, "Specification JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--samples", va.samples, "Random hull samples per polytope");
  verify->add_option("--tol", va.tol, "Formula tolerance")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", va.seed, "Sampling seed");
  verify->add_option("--report", va.report, "Where to write the JSON report");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Accuracy, drawdown and generalization");
  eval->add_option("--network", ea.network, "Network JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--baseline", ea.baseline, "Network before repair")->check(CLI::ExistingFile);
  eval->add_option("--dataset", ea.dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--mode", ea.mode, "argmax or argmin")
      ->check(CLI::IsMember({"argmax", "argmin"}));
  eval->add_option("--report", ea.report, "Where to write the JSON report");

  DemoArgs da;
  CLI::App* demo = app.add_subcommand("demo", "Run a bundled scenario");
  demo->add_option("name", da.name, "paper-overview, acas-desk or robustbox-desk")
      ->required()
      ->check(CLI::IsMember({"paper-overview", "acas-desk", "robustbox-desk"}));
  demo->add_option("--seed", da.seed, "Scenario seed");
  demo->add_option("--d", da.d, "Perturbed inputs for robustbox-desk")->check(CLI::Range(1, 16));
  demo->add_option("--samples", da.samples, "Hull samples per polytope in the final check");
  demo->add_option("--lp-backend", da.backend, "row-simplex or tableau")
      ->check(CLI::IsMember({"row-simplex", "tableau"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*repair) return RunRepair(ra);
    if (*verify) return RunVerify(va);
    if (*eval) return RunEval(ea);
    if (*demo) {
      DemoOptions options;
      options.seed = da.seed;
      options.d = da.d;
      options.samples = da.samples;
      options.repair.solver.backend = ParseBackend(da.backend);
      return RunDemo(da.name, options, std::cout);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
