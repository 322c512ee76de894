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

#ifndef POLYREPAIR_METRICS_H_
#define POLYREPAIR_METRICS_H_

#include <vector>

#include "polyrepair/network.h"
#include "polyrepair/spec.h"

namespace polyrepair {

struct Dataset {
  std::vector<Point> features;
  std::vector<std::size_t> labels;
  ClassMode mode = ClassMode::kArgmax;

  std::size_t size() const { return features.size(); }
};

// Fraction of rows whose predicted class equals the label; 1.0 for an
// empty dataset.
double Accuracy(const Network& net, const Dataset& data);

// accuracy(net) - accuracy(repaired).
double Drawdown(const Network& net, const Network& repaired, const Dataset& data);

// accuracy(repaired) - accuracy(net).
double Generalization(const Network& net, const Network& repaired, const Dataset& data);

}  // namespace polyrepair

#endif  // POLYREPAIR_METRICS_H_
