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

#include "pbrk/corruption.hpp"

#include "pbrk/error.hpp"

namespace pbrk {

void CorruptionConfig::validate() const {
  if (!(replace_prob >= 0.0 && replace_prob <= 1.0))
    throw InvalidInput("corruption: replace_prob must be in [0, 1]");
  if (copies_per_original < 0)
    throw InvalidInput("corruption: copies_per_original must be >= 0");
}

LabeledSequence corrupt_once(const EncodedSequence& seq, double replace_prob,
                             Rng& rng) {
  check_encoded(seq);
  LabeledSequence out{seq, SequenceLabel::original, {}};
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    if (!seq.break_mask[i]) continue;
    if (!rng.bernoulli(replace_prob)) continue;
    const BreakClass before = *break_of(seq.ids[i]);
    auto pick = static_cast<int>(rng.below(kNumBreakClasses - 1));
    if (pick >= index_of(before)) ++pick;
    const auto after = static_cast<BreakClass>(pick);
    out.seq.ids[i] = break_id(after);
    out.edits.push_back(BreakEdit{i, before, after});
  }
  if (!out.edits.empty()) out.label = SequenceLabel::corrupted;
  return out;
}

std::vector<LabeledSequence> build_pretrain_dataset(
    std::span<const EncodedSequence> corpus, const CorruptionConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw InvalidInput("build_pretrain_dataset: empty corpus");
  Rng rng(cfg.seed);
  std::vector<LabeledSequence> out;
  out.reserve(corpus.size() * (1 + static_cast<std::size_t>(cfg.copies_per_original)));
  for (const auto& original : corpus) {
    check_encoded(original);
    out.push_back(LabeledSequence{original, SequenceLabel::original, {}});
    for (int c = 1; c <= cfg.copies_per_original; ++c) {
      LabeledSequence copy = corrupt_once(original, cfg.replace_prob, rng);
      copy.seq.id = original.id + "#c" + std::to_string(c);
      out.push_back(std::move(copy));
    }
  }
  rng.shuffle(out.begin(), out.end());
  return out;
}

}  // namespace pbrk
