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

#include "pbrk/layers.hpp"

#include <cmath>

namespace pbrk::layers {

Matrix layer_norm(const Matrix& x, const Tensor& gain, const Tensor& bias,
                  LayerNormCache* cache) {
  const Eigen::Index rows = x.rows();
  const Eigen::Index cols = x.cols();
  Matrix xhat(rows, cols);
  Eigen::VectorXf rstd(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::RowVectorXd row = x.row(r).cast<double>();
    const double mean = row.mean();
    const Eigen::RowVectorXd centered = row.array() - mean;
    const double var = centered.squaredNorm() / static_cast<double>(cols);
    const double inv = 1.0 / std::sqrt(var + static_cast<double>(kLayerNormEps));
    rstd[r] = static_cast<float>(inv);
    xhat.row(r) = (centered * inv).cast<float>();
  }
  Matrix y = (xhat.array().rowwise() * gain.vec().array()).rowwise() +
             bias.vec().array();
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
  }
  return y;
}

Matrix layer_norm_backward(const Matrix& dy, const LayerNormCache& cache,
                           const Tensor& gain, Tensor& dgain, Tensor& dbias) {
  dgain.vec() += dy.cwiseProduct(cache.xhat).colwise().sum();
  dbias.vec() += dy.colwise().sum();
  Matrix dxhat = dy.array().rowwise() * gain.vec().array();
  Matrix dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const float m1 = dxhat.row(r).mean();
    const float m2 = dxhat.row(r).cwiseProduct(cache.xhat.row(r)).mean();
    dx.row(r) = cache.rstd[r] *
                (dxhat.row(r).array() - m1 - cache.xhat.row(r).array() * m2);
  }
  return dx;
}

Matrix linear(const Matrix& x, const Tensor& w, const Tensor& b) {
  Matrix y(x.rows(), static_cast<Eigen::Index>(w.cols()));
  y.noalias() = x * w.mat();
  y.rowwise() += b.vec();
  return y;
}

Matrix linear_backward(const Matrix& dy, const Matrix& x, const Tensor& w,
                       Tensor& dw, Tensor& db) {
  dw.mat().noalias() += x.transpose() * dy;
  db.vec() += dy.colwise().sum();
  Matrix dx(dy.rows(), static_cast<Eigen::Index>(w.rows()));
  dx.noalias() = dy * w.mat().transpose();
  return dx;
}

Matrix gelu(const Matrix& x) {
  return x.unaryExpr([](float v) {
    return 0.5f * v * (1.0f + std::erf(v * static_cast<float>(M_SQRT1_2)));
  });
}

Matrix gelu_backward(const Matrix& dy, const Matrix& x) {
  const float inv_sqrt_2pi = 0.3989422804014327f;
  Matrix d = x.unaryExpr([inv_sqrt_2pi](float v) {
    const float cdf = 0.5f * (1.0f + std::erf(v * static_cast<float>(M_SQRT1_2)));
    const float pdf = inv_sqrt_2pi * std::exp(-0.5f * v * v);
    return cdf + v * pdf;
  });
  return dy.cwiseProduct(d);
}

Matrix dropout(const Matrix& x, float p, Rng* rng, Matrix* mask) {
  if (!rng || p <= 0.0f) {
    if (mask) mask->resize(0, 0);
    return x;
  }
  const float keep_scale = 1.0f / (1.0f - p);
  Matrix m(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = rng->uniform() < p ? 0.0f : keep_scale;
  Matrix y = x.cwiseProduct(m);
  if (mask) *mask = std::move(m);
  return y;
}

float sigmoid(float x) {
  if (x >= 0.0f) return 1.0f / (1.0f + std::exp(-x));
  const float e = std::exp(x);
  return e / (1.0f + e);
}

}  // namespace pbrk::layers
