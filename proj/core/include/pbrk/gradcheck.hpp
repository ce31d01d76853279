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

#ifndef PBRK_GRADCHECK_HPP_
#define PBRK_GRADCHECK_HPP_

#include <cstdint>
#include <functional>
#include <string>

#include "pbrk/tensor.hpp"

namespace pbrk {

// Evaluates the loss at `params`; when `grads` is non-null it must also
// accumulate the analytic gradient into it (grads arrives zeroed).
using LossFunction = std::function<double(const ParamSet& params, Gradients* grads)>;

struct GradCheckOptions {
  // Derivatives come from a least-squares fit of an odd quintic to
  // f(x + t) - f(x - t) at `points` offsets evenly spaced in (0, eps].
  // Averaging over many offsets suppresses float32 rounding in the loss.
  double eps = 0.06;
  std::size_t points = 64;
  std::size_t samples_per_tensor = 200;  // all coordinates when fewer
  std::uint64_t seed = 0;
  // Denominator floor for the relative error. Coordinates whose gradients
  // are both below this are compared in absolute terms.
  double floor = 1e-2;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// Finite differences on a seeded random subsample of the coordinates of
// every tensor. Relative error is |a - n| / max(|a|, |n|, floor). `params` is
// perturbed in place and restored.
GradCheckResult grad_check(const LossFunction& loss, ParamSet& params,
                           const GradCheckOptions& opts = {});

}  // namespace pbrk

#endif  // PBRK_GRADCHECK_HPP_
