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

#ifndef PBRK_LAYERS_HPP_
#define PBRK_LAYERS_HPP_

#include <vector>

#include "pbrk/rng.hpp"
#include "pbrk/tensor.hpp"

// Building blocks shared by the encoders and heads. Each forward has a
// matching backward that accumulates into gradient tensors.
namespace pbrk::layers {

inline constexpr float kLayerNormEps = 1e-12f;

struct LayerNormCache {
  Matrix xhat;                 // normalized input, before gain/bias
  Eigen::VectorXf rstd;        // 1 / sqrt(var + eps) per row
};

Matrix layer_norm(const Matrix& x, const Tensor& gain, const Tensor& bias,
                  LayerNormCache* cache);
// Returns dx; accumulates dgain and dbias.
Matrix layer_norm_backward(const Matrix& dy, const LayerNormCache& cache,
                           const Tensor& gain, Tensor& dgain, Tensor& dbias);

// y = x W + b with W stored [in x out].
Matrix linear(const Matrix& x, const Tensor& w, const Tensor& b);
// Returns dx; accumulates dW and db.
Matrix linear_backward(const Matrix& dy, const Matrix& x, const Tensor& w,
                       Tensor& dw, Tensor& db);

// Exact (erf) GELU.
Matrix gelu(const Matrix& x);
Matrix gelu_backward(const Matrix& dy, const Matrix& x);

// Inverted dropout. An empty mask means dropout was not applied.
Matrix dropout(const Matrix& x, float p, Rng* rng, Matrix* mask);
inline Matrix dropout_backward(const Matrix& dy, const Matrix& mask) {
  return mask.size() == 0 ? dy : Matrix(dy.cwiseProduct(mask));
}

float sigmoid(float x);

}  // namespace pbrk::layers

#endif  // PBRK_LAYERS_HPP_
