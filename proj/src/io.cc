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

#include "polyrepair/io.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polyrepair {

using json = nlohmann::json;

namespace {

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(where + ": non-finite number");
  return v;
}

std::vector<double> Vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(Number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

const json& Field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(where + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

Relation ParseRelation(const std::string& s, const std::string& where) {
  if (s == "<=") return Relation::kLe;
  if (s == ">=") return Relation::kGe;
  if (s == "=" || s == "==") return Relation::kEq;
  throw InputError(where + ": unknown relation '" + s + "'");
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(what + " is not valid JSON: " + e.what());
  }
}

json PointJson(const Point& p) { return json(p); }

json StageJson(const StageReport& s) {
  return {{"name", s.name},
          {"k", s.k},
          {"l", s.l},
          {"solve_status", std::string(SolveStatusName(s.solve_status))},
          {"message", s.message},
          {"vertices", s.vertices},
          {"symbolic_neurons", s.symbolic_neurons},
          {"activation_constraints", s.activation_constraints},
          {"spec_constraints", s.spec_constraints},
          {"objective_constraints", s.objective_constraints},
          {"constraints", s.constraints},
          {"variables", s.variables},
          {"parameters", s.parameters},
          {"objective", s.objective},
          {"iterations", s.iterations},
          {"build_seconds", s.build_seconds},
          {"solve_seconds", s.solve_seconds}};
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << contents;
  if (!f) throw InputError("failed writing '" + path + "'");
}

Network NetworkFromJson(const json& j) {
  const json& layers = Field(j, "layers", "network");
  if (!layers.is_array()) throw InputError("network: \"layers\" must be an array");
  std::vector<Layer> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string where = "layer " + std::to_string(l);
    const json& lj = layers[l];
    Layer layer;
    const json& w = Field(lj, "weights", where);
    if (!w.is_array() || w.empty()) throw InputError(where + ": weights must be a non-empty array");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < w.size(); ++r) {
      rows.push_back(Vector(w[r], where + " weights[" + std::to_string(r) + "]"));
    }
    layer.weights = Matrix::FromRows(rows);
    layer.bias = Vector(Field(lj, "bias", where), where + " bias");
    const json& act = Field(lj, "activation", where);
    if (!act.is_string()) throw InputError(where + ": activation must be a string");
    layer.activation = ParseActivation(act.get<std::string>());
    out.push_back(std::move(layer));
  }
  return Network(std::move(out));
}

json NetworkToJson(const Network& net) {
  json layers = json::array();
  for (const Layer& layer : net.layers()) {
    json rows = json::array();
    for (std::size_t r = 0; r < layer.input_size(); ++r) {
      const auto row = layer.weights.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    layers.push_back({{"weights", rows},
                      {"bias", layer.bias},
                      {"activation", std::string(ActivationName(layer.activation))}});
  }
  return {{"layers", layers}};
}

Network LoadNetwork(const std::string& path) {
  return NetworkFromJson(ParseJson(ReadFile(path), "network file '" + path + "'"));
}

void SaveNetwork(const std::string& path, const Network& net) {
  WriteFile(path, NetworkToJson(net).dump(1) + "\n");
}

RepairSpec SpecFromJson(const json& j) {
  const json& items = Field(j, "items", "spec");
  if (!items.is_array()) throw InputError("spec: \"items\" must be an array");
  RepairSpec spec;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "spec item " + std::to_string(i);
    const json& poly = Field(items[i], "polytope", where);
    if (!poly.is_array() || poly.empty()) throw InputError(where + ": polytope needs vertices");
    std::vector<Point> vertices;
    for (std::size_t v = 0; v < poly.size(); ++v) {
      vertices.push_back(Vector(poly[v], where + " vertex " + std::to_string(v)));
    }
    const json& psi = Field(items[i], "psi", where);
    OutputFormula formula;
    if (psi.is_object() && psi.contains("raw")) {
      const json& raw = psi.at("raw");
      if (!raw.is_array()) throw InputError(where + ": psi.raw must be an array");
      std::vector<OutputConstraint> cs;
      for (std::size_t c = 0; c < raw.size(); ++c) {
        const std::string cw = where + " constraint " + std::to_string(c);
        OutputConstraint oc;
        oc.coeffs = Vector(Field(raw[c], "coeffs", cw), cw + " coeffs");
        const json& rel = Field(raw[c], "rel", cw);
        if (!rel.is_string()) throw InputError(cw + ": rel must be a string");
        oc.rel = ParseRelation(rel.get<std::string>(), cw);
        oc.rhs = Number(Field(raw[c], "rhs", cw), cw + " rhs");
        cs.push_back(std::move(oc));
      }
      formula = OutputFormula::Raw(std::move(cs));
    } else if (psi.is_object() && psi.contains("classify")) {
      const json& c = psi.at("classify");
      const json& label = Field(c, "label", where);
      if (!label.is_number_integer() || label.get<long long>() < 0) {
        throw InputError(where + ": label must be a non-negative integer");
      }
      const json& mode = Field(c, "mode", where);
      if (!mode.is_string()) throw InputError(where + ": mode must be a string");
      const double margin =
          c.contains("margin") ? Number(c.at("margin"), where + " margin") : OutputFormula::kDefaultMargin;
      formula = OutputFormula::Class(label.get<std::size_t>(),
                                     ParseClassMode(mode.get<std::string>()), margin);
    } else {
      throw InputError(where + ": psi must contain \"raw\" or \"classify\"");
    }
    spec.items.push_back({VPolytope(std::move(vertices)), std::move(formula)});
  }
  return spec;
}

json SpecToJson(const RepairSpec& spec) {
  json items = json::array();
  for (const SpecItem& item : spec.items) {
    json psi;
    if (item.psi.is_classify()) {
      const auto& c = *item.psi.classify();
      psi = {{"classify",
              {{"label", c.label}, {"mode", std::string(ClassModeName(c.mode))}, {"margin", c.margin}}}};
    } else {
      json raw = json::array();
      for (const OutputConstraint& c : item.psi.raw()) {
        raw.push_back({{"coeffs", c.coeffs},
                       {"rel", std::string(RelationSymbol(c.rel))},
                       {"rhs", c.rhs}});
      }
      psi = {{"raw", raw}};
    }
    items.push_back({{"polytope", item.polytope.vertices()}, {"psi", psi}});
  }
  return {{"items", items}};
}

RepairSpec LoadSpec(const std::string& path) {
  return SpecFromJson(ParseJson(ReadFile(path), "spec file '" + path + "'"));
}

void SaveSpec(const std::string& path, const RepairSpec& spec) {
  WriteFile(path, SpecToJson(spec).dump(1) + "\n");
}

Dataset ParseDatasetCsv(const std::string& text, ClassMode mode) {
  Dataset data;
  data.mode = mode;
  std::istringstream in(text);
  std::string line;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (header) {
      if (cells.size() < 2 || cells.back() != "label") {
        throw InputError("dataset header must be f0,...,f{d-1},label");
      }
      width = cells.size();
      header = false;
      continue;
    }
    const std::string where = "dataset line " + std::to_string(line_no);
    if (cells.size() != width) {
      throw InputError(where + ": expected " + std::to_string(width) + " columns, got " +
                       std::to_string(cells.size()));
    }
    Point x;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (cells[i].empty() || *end != '\0' || errno != 0 || !std::isfinite(v)) {
        throw InputError(where + ": bad number '" + cells[i] + "'");
      }
      x.push_back(v);
    }
    const std::string& lab = cells.back();
    char* end = nullptr;
    const double lv = std::strtod(lab.c_str(), &end);
    if (lab.empty() || *end != '\0' || lv < 0 || lv != std::floor(lv)) {
      throw InputError(where + ": label must be a non-negative integer");
    }
    data.features.push_back(std::move(x));
    data.labels.push_back(static_cast<std::size_t>(lv));
  }
  if (header) throw InputError("dataset is empty (missing header)");
  return data;
}

std::string DatasetToCsv(const Dataset& data) {
  std::ostringstream os;
  const std::size_t d = data.features.empty() ? 0 : data.features.front().size();
  for (std::size_t i = 0; i < d; ++i) os << "f" << i << ",";
  os << "label\n";
  for (std::size_t r = 0; r < data.features.size(); ++r) {
    for (double v : data.features[r]) os << json(v).dump() << ",";
    os << data.labels[r] << "\n";
  }
  return os.str();
}

Dataset LoadDataset(const std::string& path, ClassMode mode) {
  return ParseDatasetCsv(ReadFile(path), mode);
}

json VerifyReportToJson(const VerifyReport& report) {
  json items = json::array();
  for (const ItemReport& r : report.items) {
    json item = {{"index", r.index},
                 {"status", std::string(ItemStatusName(r.status))},
                 {"vertices_ok", r.vertices_ok},
                 {"locally_linear", r.locally_linear},
                 {"samples", r.samples},
                 {"sample_violations", r.sample_violations},
                 {"worst_slack", r.worst_slack}};
    if (!r.locally_linear) {
      item["mixed_neuron"] = {{"layer", r.mixed_layer}, {"neuron", r.mixed_neuron}};
    }
    if (r.status == ItemStatus::kFailed) {
      item["witness"] = {{"input", PointJson(r.witness)}, {"output", PointJson(r.witness_output)}};
    }
    items.push_back(std::move(item));
  }
  return {{"tool_version", kVersion},
          {"passed", report.passed()},
          {"all_certified", report.all_certified()},
          {"samples", report.options.samples},
          {"tol", report.options.tol},
          {"seed", report.options.seed},
          {"items", items}};
}

json RepairReportToJson(const RepairReport& report) {
  json stages = json::array();
  for (const StageReport& s : report.stages) stages.push_back(StageJson(s));
  json edits = json::array();
  for (const ParamEdit& e : report.edits) {
    edits.push_back({{"param", e.address.ToString()}, {"old", e.before}, {"new", e.after}});
  }
  const RepairOptions& o = report.options;
  json partition = json::array();
  for (const auto& [k, l] : report.partition.stages) partition.push_back({k, l});
  json config = {{"ref_strategy", std::string(RefStrategyName(o.ref_strategy))},
                 {"piece_margin", o.piece_margin},
                 {"feas_tol", o.solver.feas_tol},
                 {"opt_tol", o.solver.opt_tol},
                 {"backend", std::string(BackendName(o.solver.backend))},
                 {"objective", "linf(delta) + sum(|delta_i|)/|delta|"},
                 {"partition", partition},
                 {"k", report.k},
                 {"verify_samples", o.verify.samples},
                 {"verify_tol", o.verify.tol},
                 {"seed", o.verify.seed}};
  json j = {{"tool_version", kVersion},
            {"status", std::string(RepairStatusName(report.status))},
            {"message", report.message},
            {"config", config},
            {"stages", stages},
            {"constraints", report.total_constraints()},
            {"edits", edits},
            {"total_seconds", report.total_seconds}};
  if (report.failed_stage >= 0) j["failed_stage"] = report.failed_stage;
  if (!report.stages.empty()) {
    j["variables"] = report.stages.back().variables;
    j["objective"] = report.stages.back().objective;
  }
  if (report.verification) j["verification"] = VerifyReportToJson(*report.verification);
  return j;
}

}  // namespace polyrepair
