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

#include "pbrk/reference.hpp"

#include <cstdlib>

#include "pbrk/error.hpp"

namespace pbrk {
namespace {

void require_same_words(const TokenSequence& test, const TokenSequence& ref) {
  if (test.words() != ref.words())
    throw InvalidInput("reference '" + ref.id() + "' does not share the words of '" +
                       test.id() + "'");
}

}  // namespace

double break_similarity(const TokenSequence& test, const TokenSequence& ref) {
  require_same_words(test, ref);
  const auto& a = test.breaks();
  const auto& b = ref.breaks();
  if (a.empty()) return 1.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) ++same;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

Rank rank_from_similarity(double score) {
  if (!(score >= 0.0 && score <= 1.0))
    throw InvalidInput("similarity score must lie in [0, 1]");
  if (score < 0.3) return Rank::poor;
  if (score < 0.7) return Rank::fair;
  return Rank::great;
}

std::vector<Rank> fine_rank_against_reference(const TokenSequence& test,
                                              const TokenSequence& ref) {
  require_same_words(test, ref);
  std::vector<Rank> out;
  out.reserve(test.breaks().size());
  for (std::size_t i = 0; i < test.breaks().size(); ++i) {
    const int d = std::abs(index_of(test.breaks()[i]) - index_of(ref.breaks()[i]));
    out.push_back(d == 0 ? Rank::great : d == 1 ? Rank::fair : Rank::poor);
  }
  return out;
}

double best_of_references(const TokenSequence& test,
                          std::span<const TokenSequence> refs) {
  if (refs.empty()) throw InvalidInput("no reference for '" + test.id() + "'");
  double best = 0.0;
  for (const auto& r : refs) best = std::max(best, break_similarity(test, r));
  return best;
}

void ReferenceSet::add(const TokenSequence& ref) {
  auto& list = refs_[ref.id()];
  if (!list.empty() && list.front().words() != ref.words())
    throw InvalidInput("references for '" + ref.id() + "' disagree on the words");
  list.push_back(ref);
}

std::span<const TokenSequence> ReferenceSet::find(const std::string& id) const {
  auto it = refs_.find(id);
  if (it == refs_.end()) return {};
  return it->second;
}

}  // namespace pbrk
