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

#include "pbrk/loss.hpp"

#include <algorithm>
#include <cmath>

#include "pbrk/error.hpp"

namespace pbrk {

std::vector<float> softmax(std::span<const float> logits) {
  std::vector<float> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const float mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (float& x : p) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (float& x : p) x = static_cast<float>(x / sum);
  return p;
}

LossResult softmax_cross_entropy(std::span<const float> logits,
                                 std::size_t target, float weight) {
  if (target >= logits.size())
    throw InvalidInput("cross entropy: target " + std::to_string(target) +
                       " out of range for " + std::to_string(logits.size()) +
                       " classes");
  const float mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (float x : logits) sum += std::exp(static_cast<double>(x - mx));
  const double log_z = std::log(sum);
  LossResult r;
  r.loss = weight * (log_z - static_cast<double>(logits[target] - mx));
  r.grad.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) {
    const double p = std::exp(static_cast<double>(logits[c] - mx) - log_z);
    r.grad[c] = weight * static_cast<float>(p - (c == target ? 1.0 : 0.0));
  }
  return r;
}

}  // namespace pbrk
