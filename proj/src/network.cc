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

#include "polyrepair/network.h"

#include <cmath>
#include <sstream>

namespace polyrepair {

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kReLU:
      return "relu";
    case Activation::kHardswish:
      return "hardswish";
  }
  return "identity";
}

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kReLU;
  if (name == "hardswish") return Activation::kHardswish;
  throw InputError("unknown activation '" + std::string(name) + "'");
}

double Activate(Activation activation, double x) {
  switch (activation) {
    case Activation::kIdentity:
      return x;
    case Activation::kReLU:
      return x >= 0.0 ? x : 0.0;
    case Activation::kHardswish:
      if (x <= -3.0) return 0.0;
      if (x >= 3.0) return x;
      return x * (x + 3.0) / 6.0;
  }
  return x;
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw InputError("ragged matrix: row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " entries, expected " +
                       std::to_string(m.cols()));
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Point Layer::PreActivation(std::span<const double> x) const {
  if (x.size() != input_size()) {
    throw InputError("layer input has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(input_size()));
  }
  const std::size_t n_out = output_size();
  Point out(n_out, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    std::span<const double> w = weights.row(i);
    for (std::size_t j = 0; j < n_out; ++j) out[j] += xi * w[j];
  }
  for (std::size_t j = 0; j < n_out; ++j) out[j] += bias[j];
  return out;
}

std::string ParamAddress::ToString() const {
  std::ostringstream os;
  if (kind == Kind::kWeight) {
    os << "W" << layer << "[" << row << "," << col << "]";
  } else {
    os << "B" << layer << "[" << col << "]";
  }
  return os.str();
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InputError("network must have at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.input_size() == 0 || layer.output_size() == 0) {
      throw InputError(where + ": empty weight matrix");
    }
    if (layer.bias.size() != layer.output_size()) {
      throw InputError(where + ": bias length " + std::to_string(layer.bias.size()) +
                       " does not match " + std::to_string(layer.output_size()) +
                       " weight columns");
    }
    for (double w : layer.weights.data()) {
      if (!std::isfinite(w)) throw InputError(where + ": non-finite weight");
    }
    for (double b : layer.bias) {
      if (!std::isfinite(b)) throw InputError(where + ": non-finite bias");
    }
    if (l > 0 && layers_[l - 1].output_size() != layer.input_size()) {
      throw InputError(where + ": input width " + std::to_string(layer.input_size()) +
                       " does not match previous output width " +
                       std::to_string(layers_[l - 1].output_size()));
    }
  }
}

std::size_t Network::num_parameters() const {
  std::size_t n = 0;
  for (const Layer& layer : layers_) n += layer.weights.data().size() + layer.bias.size();
  return n;
}

Point Network::Forward(std::span<const double> x) const {
  if (x.size() != input_size()) {
    throw InputError("input has dimension " + std::to_string(x.size()) +
                     ", network expects " + std::to_string(input_size()));
  }
  Point current(x.begin(), x.end());
  for (const Layer& layer : layers_) {
    Point next = layer.PreActivation(current);
    for (double& v : next) v = Activate(layer.activation, v);
    current = std::move(next);
  }
  return current;
}

std::vector<LayerTrace> Network::ForwardTrace(std::span<const double> x) const {
  if (x.size() != input_size()) {
    throw InputError("input has dimension " + std::to_string(x.size()) +
                     ", network expects " + std::to_string(input_size()));
  }
  std::vector<LayerTrace> trace;
  trace.reserve(layers_.size());
  Point current(x.begin(), x.end());
  for (const Layer& layer : layers_) {
    LayerTrace t;
    t.pre_activation = layer.PreActivation(current);
    t.post_activation = t.pre_activation;
    for (double& v : t.post_activation) v = Activate(layer.activation, v);
    current = t.post_activation;
    trace.push_back(std::move(t));
  }
  return trace;
}

Network Network::Slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > layers_.size()) {
    throw InputError("invalid slice [" + std::to_string(begin) + ", " +
                     std::to_string(end) + ") of a " +
                     std::to_string(layers_.size()) + "-layer network");
  }
  return Network(std::vector<Layer>(layers_.begin() + begin, layers_.begin() + end));
}

void Network::CheckAddress(const ParamAddress& a) const {
  if (a.layer >= layers_.size()) {
    throw InputError("parameter address " + a.ToString() + " out of range");
  }
  const Layer& layer = layers_[a.layer];
  const bool ok = a.kind == ParamAddress::Kind::kWeight
                      ? a.row < layer.input_size() && a.col < layer.output_size()
                      : a.col < layer.output_size();
  if (!ok) throw InputError("parameter address " + a.ToString() + " out of range");
}

double Network::Parameter(const ParamAddress& a) const {
  CheckAddress(a);
  const Layer& layer = layers_[a.layer];
  return a.kind == ParamAddress::Kind::kWeight ? layer.weights(a.row, a.col)
                                               : layer.bias[a.col];
}

void Network::SetParameter(const ParamAddress& a, double value) {
  CheckAddress(a);
  if (!std::isfinite(value)) {
    throw InputError("non-finite value for parameter " + a.ToString());
  }
  Layer& layer = layers_[a.layer];
  if (a.kind == ParamAddress::Kind::kWeight) {
    layer.weights(a.row, a.col) = value;
  } else {
    layer.bias[a.col] = value;
  }
}

bool Network::SameArchitecture(const Network& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& a = layers_[l];
    const Layer& b = other.layers_[l];
    if (a.input_size() != b.input_size() || a.output_size() != b.output_size() ||
        a.bias.size() != b.bias.size() || a.activation != b.activation) {
      return false;
    }
  }
  return true;
}

VPolytope::VPolytope(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InputError("polytope needs at least one vertex");
  const std::size_t dim = vertices_.front().size();
  for (const Point& v : vertices_) {
    if (v.size() != dim) throw InputError("polytope vertices differ in dimension");
    for (double x : v) {
      if (!std::isfinite(x)) throw InputError("non-finite polytope vertex");
    }
  }
}

Point VPolytope::Centroid() const {
  Point c(dimension(), 0.0);
  for (const Point& v : vertices_) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
  }
  for (double& x : c) x /= static_cast<double>(vertices_.size());
  return c;
}

VPolytope VPolytope::Box(const Point& lower, const Point& upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw InputError("box bounds must be nonempty and of equal dimension");
  }
  const std::size_t d = lower.size();
  if (d > 24) throw InputError("box dimension too large for vertex enumeration");
  std::vector<Point> vertices;
  vertices.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? upper[i] : lower[i];
    vertices.push_back(std::move(v));
  }
  return VPolytope(std::move(vertices));
}

VPolytope ForwardPolytope(const Network& net, const VPolytope& polytope) {
  std::vector<Point> out;
  out.reserve(polytope.num_vertices());
  for (const Point& v : polytope.vertices()) out.push_back(net.Forward(v));
  return VPolytope(std::move(out));
}

}  // namespace polyrepair
