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

#include "polyrepair/metrics.h"

namespace polyrepair {

double Accuracy(const Network& net, const Dataset& data) {
  if (data.features.size() != data.labels.size()) {
    throw InputError("dataset has " + std::to_string(data.features.size()) + " rows but " +
                     std::to_string(data.labels.size()) + " labels");
  }
  if (data.features.empty()) return 1.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    if (data.labels[i] >= net.output_size()) {
      throw InputError("label " + std::to_string(data.labels[i]) + " in row " +
                       std::to_string(i) + " exceeds the network output width");
    }
    if (ArgExtreme(net.Forward(data.features[i]), data.mode) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.features.size());
}

double Drawdown(const Network& net, const Network& repaired, const Dataset& data) {
  return Accuracy(net, data) - Accuracy(repaired, data);
}

double Generalization(const Network& net, const Network& repaired, const Dataset& data) {
  return -Drawdown(net, repaired, data);
}

}  // namespace polyrepair
