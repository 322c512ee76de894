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

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyrepair/lp.h"

namespace polyrepair {

namespace {

namespace fs = std::filesystem;

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

class ExternalSolver final : public LpSolver {
 public:
  std::string_view name() const override { return "external"; }

  SolveResult Solve(const LpProblem& problem, const SolverOptions& options) const override {
    SolveResult result;
    std::string command = options.external_command;
    if (command.empty()) {
      if (const char* env = std::getenv("POLYREPAIR_LP_COMMAND")) command = env;
    }
    if (command.empty()) {
      result.message = "no external LP command configured";
      return result;
    }

    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("polyrepair-lp-" + std::to_string(::getpid()) + "-" +
                          std::to_string(counter++));
    fs::create_directories(dir);
    const fs::path in = dir / "problem.json";
    const fs::path out = dir / "solution.json";
    {
      std::ofstream f(in);
      f << ProblemToJson(problem);
    }
    const std::string cmd = command + " " + Quote(in.string()) + " " + Quote(out.string());
    const int rc = std::system(cmd.c_str());
    std::ifstream f(out);
    if (rc != 0 || !f) {
      result.message = "external LP command failed (" + std::to_string(rc) + "): " + cmd;
      std::error_code ec;
      fs::remove_all(dir, ec);
      return result;
    }
    std::stringstream text;
    text << f.rdbuf();
    f.close();
    result = SolutionFromJson(text.str(), problem);
    std::error_code ec;
    fs::remove_all(dir, ec);
    return result;
  }
};

}  // namespace

std::unique_ptr<LpSolver> MakeExternalSolver() { return std::make_unique<ExternalSolver>(); }

}  // namespace polyrepair
