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

#ifndef PBRK_REFERENCE_HPP_
#define PBRK_REFERENCE_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pbrk/tasks.hpp"
#include "pbrk/tokens.hpp"

namespace pbrk {

// Baseline that judges a rendition by how closely its breaks match a
// reference rendition of the same text.

// Fraction of break positions whose classes are equal. A single-word pair
// (no break positions) scores 1. Throws InvalidInput when the word
// sequences differ.
double break_similarity(const TokenSequence& test, const TokenSequence& ref);

// [0, 0.3) Poor, [0.3, 0.7) Fair, [0.7, 1] Great. Throws InvalidInput
// outside [0, 1].
Rank rank_from_similarity(double score);

// Per break position: same class Great, neighbouring class Fair, else Poor.
std::vector<Rank> fine_rank_against_reference(const TokenSequence& test,
                                              const TokenSequence& ref);

// Highest similarity over the references. Throws InvalidInput when `refs`
// is empty.
double best_of_references(const TokenSequence& test,
                          std::span<const TokenSequence> refs);

// References keyed by utterance id; every reference for one id shares the
// same word sequence.
class ReferenceSet {
 public:
  // Throws InvalidInput when the words differ from earlier references
  // with the same id.
  void add(const TokenSequence& ref);

  // Empty span when the id is unknown.
  std::span<const TokenSequence> find(const std::string& id) const;
  std::size_t size() const { return refs_.size(); }

 private:
  std::map<std::string, std::vector<TokenSequence>> refs_;
};

}  // namespace pbrk

#endif  // PBRK_REFERENCE_HPP_
