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

#include "pbrk/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "pbrk/error.hpp"

namespace pbrk {

Tensor::Tensor(std::vector<std::size_t> shape, float fill)
    : shape_(std::move(shape)) {
  if (shape_.empty()) throw InvalidInput("tensor: empty shape");
  for (std::size_t d : shape_)
    if (d == 0) throw InvalidInput("tensor: zero dimension");
  data_.assign(std::accumulate(shape_.begin(), shape_.end(), std::size_t{1},
                               std::multiplies<>()),
               fill);
}

std::size_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  return data_.size() / shape_.back();
}

std::size_t Tensor::cols() const { return shape_.empty() ? 0 : shape_.back(); }

MatrixMap Tensor::mat() {
  return MatrixMap(data_.data(), static_cast<Eigen::Index>(rows()),
                   static_cast<Eigen::Index>(cols()));
}

ConstMatrixMap Tensor::mat() const {
  return ConstMatrixMap(data_.data(), static_cast<Eigen::Index>(rows()),
                        static_cast<Eigen::Index>(cols()));
}

RowVectorMap Tensor::vec() {
  return RowVectorMap(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

ConstRowVectorMap Tensor::vec() const {
  return ConstRowVectorMap(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

void Tensor::fill(float v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float x) { return std::isfinite(x); });
}

std::size_t ParamSet::add(const std::string& name,
                          std::vector<std::size_t> shape) {
  if (lookup_.count(name)) throw InvalidInput("duplicate parameter '" + name + "'");
  const std::size_t i = tensors_.size();
  tensors_.emplace_back(std::move(shape));
  names_.push_back(name);
  lookup_.emplace(name, i);
  return i;
}

std::size_t ParamSet::index(const std::string& name) const {
  auto it = lookup_.find(name);
  if (it == lookup_.end()) throw InvalidInput("unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParamSet::total_size() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

bool ParamSet::all_finite() const {
  return std::all_of(tensors_.begin(), tensors_.end(),
                     [](const Tensor& t) { return t.all_finite(); });
}

void ParamSet::fill(float v) {
  for (auto& t : tensors_) t.fill(v);
}

ParamSet ParamSet::zeros_like() const {
  ParamSet out;
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    out.add(names_[i], tensors_[i].shape());
  return out;
}

bool ParamSet::same_layout(const ParamSet& other) const {
  if (names_ != other.names_) return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    if (tensors_[i].shape() != other.tensors_[i].shape()) return false;
  return true;
}

void ParamSet::add_scaled(const ParamSet& other, float scale) {
  if (!same_layout(other)) throw InvalidInput("parameter layouts differ");
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    tensors_[i].vec() += scale * other.tensors_[i].vec();
}

void ParamSet::scale(float s) {
  for (auto& t : tensors_) t.vec() *= s;
}

}  // namespace pbrk
