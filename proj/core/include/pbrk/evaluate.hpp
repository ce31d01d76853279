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

#ifndef PBRK_EVALUATE_HPP_
#define PBRK_EVALUATE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pbrk/crossval.hpp"
#include "pbrk/metrics.hpp"
#include "pbrk/model.hpp"
#include "pbrk/reference.hpp"
#include "pbrk/synth.hpp"
#include "pbrk/tasks.hpp"

namespace pbrk {

// Encodes synthetic learner samples with their ground-truth ranks attached.
std::vector<RatedSample> rated_samples(std::span<const EslSample> data,
                                       const Vocabulary& vocab,
                                       std::size_t max_len = kDefaultMaxLen);

// The reference rendition of every sample, keyed by the sample id.
ReferenceSet reference_set(std::span<const EslSample> data);

enum class Assessor : std::uint8_t { transformer, bilstm, against_reference };
std::string_view to_string(Assessor a);
Assessor parse_assessor(std::string_view s);

struct EvalSpec {
  TaskKind task = TaskKind::finegrained;  // overall or finegrained
  Assessor assessor = Assessor::transformer;
  std::size_t k = 5;
  std::uint64_t seed = 0;  // fold assignment
  // Per-fold training. Fold f trains with seed derive_seed(train.seed, f).
  TrainConfig train;
  // Architecture for a fresh backbone; vocab sizes are filled in.
  BackboneSpec backbone;
  // Transformer only: start every fold from this checkpoint's backbone.
  const Checkpoint* init = nullptr;
  // Required for against_reference.
  const ReferenceSet* references = nullptr;
};

// Per-fold hook: fold index (0-based) and its confusion matrix.
using FoldCallback = std::function<void(std::size_t fold, const ConfusionMatrix& cm)>;

// Stratified k-fold evaluation. Folds are stratified on the overall rank,
// or on the rank aggregated from the fine ranks when a sample has none.
// Fine-grained confusion counts every break position of the test fold.
// The against-reference assessor is not trained: each test sample is
// decoded with `vocab` and compared with its references.
// Throws InvalidInput on missing labels or references, or when `init`
// was built with a different vocabulary.
MetricsReport evaluate(std::span<const RatedSample> data, const Vocabulary& vocab,
                       const EvalSpec& spec, const FoldCallback& on_fold = {});

}  // namespace pbrk

#endif  // PBRK_EVALUATE_HPP_
