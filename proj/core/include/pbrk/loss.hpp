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

#ifndef PBRK_LOSS_HPP_
#define PBRK_LOSS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace pbrk {

struct LossResult {
  double loss = 0.0;
  std::vector<float> grad;  // d loss / d logits
};

// Max-subtracted softmax.
std::vector<float> softmax(std::span<const float> logits);

// loss = -weight * log softmax(logits)[target]; grad = weight * (softmax - onehot).
// Throws InvalidInput when target >= logits.size().
LossResult softmax_cross_entropy(std::span<const float> logits,
                                 std::size_t target, float weight = 1.0f);

}  // namespace pbrk

#endif  // PBRK_LOSS_HPP_
