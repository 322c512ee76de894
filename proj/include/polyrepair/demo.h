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

#ifndef POLYREPAIR_DEMO_H_
#define POLYREPAIR_DEMO_H_

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "polyrepair/repair.h"

namespace polyrepair {

// One-input, one-output toy networks of the overview walk-through.
namespace toy {

Network Dnn1();
Network Dnn2();
Network Dnn3();
Network Dnn4();
Network Dnn5();

// -0.1 <= y <= 0.1 on the points -1.5 and -0.5.
RepairSpec PointSpec();
// P1 = hull{-1.5, -0.5} with -0.1 <= y <= 0.1 and P2 = hull{1.5, 3} with
// 0 <= y <= 0.4.
RepairSpec PolytopeSpec();

}  // namespace toy

// Fully-connected network with the given layer widths (input first), the
// given hidden activation and an identity output layer. Weights are
// Gaussian with variance 2 / fan_in, biases Gaussian with deviation 0.1.
Network RandomNetwork(std::uint64_t seed, const std::vector<std::size_t>& widths,
                      Activation hidden = Activation::kReLU);

struct Scenario {
  Network net;
  RepairSpec spec;
  Partition partition;
  std::size_t k = 0;
};

// 5-input, 7-layer width-16 ReLU network; `boxes` disjoint 5-D boxes of side
// 0.05 on a grid, preferring boxes whose vertices disagree on the argmin
// class; each box must keep the argmin class of its center. Shifts every
// hidden layer and repairs the output layer.
Scenario MakeAcasScenario(std::uint64_t seed, std::size_t boxes = 24);

// 16-input network with three hidden layers; one d-pixel L-infinity box of
// radius 0.1 around a random input that must keep the argmax class of the
// center. Uses s = [(0,1)] and k = 1.
Scenario MakeRobustBoxScenario(std::uint64_t seed, std::size_t d);

struct DemoOptions {
  std::uint64_t seed = 1;
  std::size_t d = 5;
  std::size_t samples = 10000;
  RepairOptions repair;
};

// Runs a named scenario ("paper-overview", "acas-desk", "robustbox-desk"),
// printing a pass/fail table. Returns the CLI exit code.
int RunDemo(std::string_view name, const DemoOptions& options, std::ostream& out);

}  // namespace polyrepair

#endif  // POLYREPAIR_DEMO_H_
