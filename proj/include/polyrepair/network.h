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

#ifndef POLYREPAIR_NETWORK_H_
#define POLYREPAIR_NETWORK_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyrepair/error.h"

namespace polyrepair {

// A concrete point in some layer's space (row-vector convention).
using Point = std::vector<double>;

enum class Activation { kIdentity, kReLU, kHardswish };

std::string_view ActivationName(Activation activation);

// Accepts "identity", "relu" and "hardswish"; anything else throws InputError.
Activation ParseActivation(std::string_view name);

// Scalar activation. Hardswish is evaluated as x*(x+3)/6 on (-3, 3).
double Activate(Activation activation, double x);

// Row-major dense matrix. Rows index layer inputs, columns layer outputs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Layer {
  Matrix weights;  // n_in x n_out
  std::vector<double> bias;  // n_out
  Activation activation = Activation::kIdentity;

  std::size_t input_size() const { return weights.rows(); }
  std::size_t output_size() const { return weights.cols(); }

  // X*W + B without the activation.
  Point PreActivation(std::span<const double> x) const;

  bool operator==(const Layer&) const = default;
};

// Addresses one trainable parameter of a network.
struct ParamAddress {
  enum class Kind { kWeight, kBias };

  std::size_t layer = 0;
  Kind kind = Kind::kBias;
  std::size_t row = 0;  // unused for biases
  std::size_t col = 0;

  static ParamAddress Weight(std::size_t layer, std::size_t row, std::size_t col) {
    return {layer, Kind::kWeight, row, col};
  }
  static ParamAddress Bias(std::size_t layer, std::size_t col) {
    return {layer, Kind::kBias, 0, col};
  }
  std::string ToString() const;

  auto operator<=>(const ParamAddress&) const = default;
};

struct LayerTrace {
  Point pre_activation;
  Point post_activation;
};

// A fully-connected feedforward network; immutable through the const API.
class Network {
 public:
  Network() = default;
  // Validates shapes, finiteness and that at least one layer is present.
  explicit Network(std::vector<Layer> layers);

  std::size_t num_layers() const { return layers_.size(); }
  const Layer& layer(std::size_t index) const { return layers_.at(index); }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t input_size() const { return layers_.front().input_size(); }
  std::size_t output_size() const { return layers_.back().output_size(); }
  std::size_t num_parameters() const;

  Point Forward(std::span<const double> x) const;
  std::vector<LayerTrace> ForwardTrace(std::span<const double> x) const;

  // Layers [begin, end) as an independent network.
  Network Slice(std::size_t begin, std::size_t end) const;

  double Parameter(const ParamAddress& address) const;
  void SetParameter(const ParamAddress& address, double value);

  // Shapes and activation tags match (parameter values may differ).
  bool SameArchitecture(const Network& other) const;

  bool operator==(const Network&) const = default;

 private:
  void CheckAddress(const ParamAddress& address) const;

  std::vector<Layer> layers_;
};

// Convex hull of a finite vertex list. Duplicates are kept so vertex indices
// stay stable in reports.
class VPolytope {
 public:
  VPolytope() = default;
  explicit VPolytope(std::vector<Point> vertices);

  std::size_t dimension() const { return vertices_.front().size(); }
  std::size_t num_vertices() const { return vertices_.size(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(std::size_t i) const { return vertices_.at(i); }

  Point Centroid() const;

  static VPolytope Singleton(Point p) { return VPolytope({std::move(p)}); }
  // Axis-aligned box; vertex j takes upper[i] when bit i of j is set.
  static VPolytope Box(const Point& lower, const Point& upper);

 private:
  std::vector<Point> vertices_;
};

// Maps every vertex through the network; vertex order is preserved.
VPolytope ForwardPolytope(const Network& net, const VPolytope& polytope);

}  // namespace polyrepair

#endif  // POLYREPAIR_NETWORK_H_
