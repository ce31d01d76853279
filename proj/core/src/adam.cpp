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

#include "pbrk/adam.hpp"

#include <cmath>

#include "pbrk/error.hpp"

namespace pbrk {

void adam_step(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
               const AdamConfig& cfg, std::uint64_t t) {
  if (param.shape() != grad.shape() || param.shape() != m.shape() ||
      param.shape() != v.shape())
    throw InvalidInput("adam: parameter, gradient and moment shapes differ");
  if (t == 0) throw InvalidInput("adam: step count starts at 1");
  const double bc1 = 1.0 - std::pow(static_cast<double>(cfg.beta1), static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(static_cast<double>(cfg.beta2), static_cast<double>(t));
  const float step = static_cast<float>(cfg.lr / bc1);
  const float v_scale = static_cast<float>(1.0 / std::sqrt(bc2));
  auto p = param.data();
  auto g = grad.data();
  auto mm = m.data();
  auto vv = v.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    mm[i] = cfg.beta1 * mm[i] + (1.0f - cfg.beta1) * g[i];
    vv[i] = cfg.beta2 * vv[i] + (1.0f - cfg.beta2) * g[i] * g[i];
    p[i] -= step * mm[i] / (std::sqrt(vv[i]) * v_scale + cfg.eps);
  }
}

Adam::Adam(const ParamSet& params, AdamConfig cfg)
    : cfg_(cfg), m_(params.zeros_like()), v_(params.zeros_like()) {}

void Adam::step(ParamSet& params, const Gradients& grads) {
  if (!params.same_layout(m_) || !grads.same_layout(m_))
    throw InvalidInput("adam: parameter layout changed");
  ++t_;
  for (std::size_t i = 0; i < params.count(); ++i)
    adam_step(params[i], grads[i], m_[i], v_[i], cfg_, t_);
}

}  // namespace pbrk
