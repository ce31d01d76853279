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

#ifndef PBRK_ADAM_HPP_
#define PBRK_ADAM_HPP_

#include <cstdint>

#include "pbrk/tensor.hpp"

namespace pbrk {

struct AdamConfig {
  float lr = 1e-4f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
};

// One bias-corrected Adam update on a single tensor; t is the 1-based step.
// Throws InvalidInput on shape mismatch or t == 0.
void adam_step(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
               const AdamConfig& cfg, std::uint64_t t);

class Adam {
 public:
  Adam(const ParamSet& params, AdamConfig cfg);

  // Advances the step counter and updates every tensor in `params`.
  void step(ParamSet& params, const Gradients& grads);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  ParamSet m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace pbrk

#endif  // PBRK_ADAM_HPP_
