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

#ifndef PBRK_CORRUPTION_HPP_
#define PBRK_CORRUPTION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pbrk/rng.hpp"
#include "pbrk/tokens.hpp"
#include "pbrk/vocab.hpp"

namespace pbrk {

struct CorruptionConfig {
  double replace_prob = 0.15;
  int copies_per_original = 3;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const CorruptionConfig&) const = default;
};

enum class SequenceLabel : std::uint8_t { original = 0, corrupted = 1 };

struct BreakEdit {
  std::size_t position = 0;  // index into ids
  BreakClass before = BreakClass::br0;
  BreakClass after = BreakClass::br0;

  bool operator==(const BreakEdit&) const = default;
};

struct LabeledSequence {
  EncodedSequence seq;
  SequenceLabel label = SequenceLabel::original;
  std::vector<BreakEdit> edits;

  bool operator==(const LabeledSequence&) const = default;
};

// Each break position is independently replaced with probability
// replace_prob by one of the three other classes, chosen uniformly. Word
// positions are never touched. The label reflects what actually happened:
// an attempt that changed nothing is `original`.
LabeledSequence corrupt_once(const EncodedSequence& seq, double replace_prob,
                             Rng& rng);

// Every original once plus copies_per_original corruption attempts of it,
// in a seeded shuffle. Corrupted copies get ids "<id>#c<k>".
std::vector<LabeledSequence> build_pretrain_dataset(
    std::span<const EncodedSequence> corpus, const CorruptionConfig& cfg);

}  // namespace pbrk

#endif  // PBRK_CORRUPTION_HPP_
