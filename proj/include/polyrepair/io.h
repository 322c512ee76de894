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

// File formats. All parse errors throw InputError.
//
// Network:  {"layers": [{"weights": [[..], ..], "bias": [..],
//                        "activation": "identity"|"relu"|"hardswish"}]}
// Spec:     {"items": [{"polytope": [[..vertex..], ..],
//                       "psi": {"raw": [{"coeffs": [..], "rel": "<=", "rhs": r}]}
//                            | {"classify": {"label": i, "mode": "argmax",
//                                            "margin": m}}}]}
// Dataset:  CSV with header f0,..,f{d-1},label.

#ifndef POLYREPAIR_IO_H_
#define POLYREPAIR_IO_H_

#include <string>

#include "json.hpp"
#include "polyrepair/metrics.h"
#include "polyrepair/repair.h"

namespace polyrepair {

inline constexpr const char* kVersion = "0.1.0";

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

Network NetworkFromJson(const nlohmann::json& j);
nlohmann::json NetworkToJson(const Network& net);
Network LoadNetwork(const std::string& path);
void SaveNetwork(const std::string& path, const Network& net);

RepairSpec SpecFromJson(const nlohmann::json& j);
nlohmann::json SpecToJson(const RepairSpec& spec);
RepairSpec LoadSpec(const std::string& path);
void SaveSpec(const std::string& path, const RepairSpec& spec);

Dataset ParseDatasetCsv(const std::string& text, ClassMode mode);
std::string DatasetToCsv(const Dataset& data);
Dataset LoadDataset(const std::string& path, ClassMode mode);

nlohmann::json VerifyReportToJson(const VerifyReport& report);
nlohmann::json RepairReportToJson(const RepairReport& report);

}  // namespace polyrepair

#endif  // POLYREPAIR_IO_H_
