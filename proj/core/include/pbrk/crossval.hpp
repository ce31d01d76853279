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

#ifndef PBRK_CROSSVAL_HPP_
#define PBRK_CROSSVAL_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pbrk/metrics.hpp"

namespace pbrk {

// Stratified k-fold partition of item indices 0..n-1, where n =
// strata.size() and strata[i] is item i's class. Items of each class are
// shuffled with the seed and dealt round-robin, continuing the deal across
// classes, so per-class fold counts and fold sizes each differ by at most
// one. Each fold is returned sorted. Throws InvalidInput when k < 2 or
// k > n.
std::vector<std::vector<std::size_t>> kfold_split(std::span<const int> strata,
                                                  std::size_t k, std::uint64_t seed);

// Trains on `train` and returns the confusion matrix on `test`.
using FoldTrainer = std::function<ConfusionMatrix(
    std::span<const std::size_t> train, std::span<const std::size_t> test,
    std::size_t fold)>;

// Runs the trainer once per fold and aggregates mean and population std.
// A failure in any fold is rethrown with the fold index in the message.
MetricsReport cross_validate(std::span<const int> strata, std::size_t k,
                             std::uint64_t seed, const FoldTrainer& trainer);

}  // namespace pbrk

#endif  // PBRK_CROSSVAL_HPP_
