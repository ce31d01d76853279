/* Copyright 2026 The pbrk Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PBRK_TENSOR_HPP_
#define PBRK_TENSOR_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace pbrk {

using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<float, 1, Eigen::Dynamic>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;
using RowVectorMap = Eigen::Map<RowVector>;
using ConstRowVectorMap = Eigen::Map<const RowVector>;

// Dense row-major float32 tensor. Rank 1 and 2 are viewed through Eigen
// maps; a rank-1 tensor of length n reads as a 1 x n row.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, float fill = 0.0f);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  MatrixMap mat();
  ConstMatrixMap mat() const;
  RowVectorMap vec();
  ConstRowVectorMap vec() const;

  void fill(float v);
  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<float> data_;
};

// Named parameters in registration order. The order is the serialization
// order and the iteration order for optimizers and gradient checks.
class ParamSet {
 public:
  // Throws InvalidInput on a duplicate name or a zero dimension.
  std::size_t add(const std::string& name, std::vector<std::size_t> shape);

  std::size_t count() const { return tensors_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Tensor& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }

  std::size_t index(const std::string& name) const;  // throws when absent
  bool contains(const std::string& name) const { return lookup_.count(name) != 0; }

  std::size_t total_size() const;
  bool all_finite() const;
  void fill(float v);

  // A set with identical names/shapes, zero-filled. Used for gradients and
  // optimizer moments.
  ParamSet zeros_like() const;
  bool same_layout(const ParamSet& other) const;

  void add_scaled(const ParamSet& other, float scale);  // this += scale * other
  void scale(float s);

  bool operator==(const ParamSet& o) const {
    return names_ == o.names_ && tensors_ == o.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// Gradients share ParamSet's layout.
using Gradients = ParamSet;

}  // namespace pbrk

#endif  // PBRK_TENSOR_HPP_
