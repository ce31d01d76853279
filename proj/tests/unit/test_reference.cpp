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

#include "doctest.h"
#include "pbrk/error.hpp"
#include "pbrk/reference.hpp"

using namespace pbrk;

namespace {

constexpr BreakClass b0 = BreakClass::br0, b1 = BreakClass::br1, b2 = BreakClass::br2,
                     b3 = BreakClass::br3;

TokenSequence seq(std::vector<BreakClass> breaks, std::string id = "u") {
  std::vector<std::string> words;
  for (std::size_t i = 0; i <= breaks.size(); ++i) words.push_back("w" + std::to_string(i));
  return TokenSequence(std::move(id), std::move(words), std::move(breaks));
}

}  // namespace

TEST_CASE("similarity is the fraction of matching break classes") {
  CHECK(break_similarity(seq({b0, b1, b2, b3}), seq({b0, b1, b2, b3})) == 1.0);
  CHECK(break_similarity(seq({b0, b1, b2, b3}), seq({b0, b2, b2, b0})) == 0.5);
  CHECK(break_similarity(seq({}), seq({})) == 1.0);
  const TokenSequence other("u", {"x", "y"}, {b0});
  CHECK_THROWS_AS(break_similarity(seq({b0}), other), InvalidInput);
}

TEST_CASE("similarity thresholds map onto ranks") {
  CHECK(rank_from_similarity(0.0) == Rank::poor);
  CHECK(rank_from_similarity(0.2999) == Rank::poor);
  CHECK(rank_from_similarity(0.3) == Rank::fair);
  CHECK(rank_from_similarity(0.6999) == Rank::fair);
  CHECK(rank_from_similarity(0.7) == Rank::great);
  CHECK(rank_from_similarity(1.0) == Rank::great);
  CHECK_THROWS_AS(rank_from_similarity(1.01), InvalidInput);
  CHECK_THROWS_AS(rank_from_similarity(-0.1), InvalidInput);
}

TEST_CASE("fine ranks compare each break with the reference") {
  const auto r = fine_rank_against_reference(seq({b0, b1, b3, b0}), seq({b0, b2, b1, b3}));
  CHECK(r == std::vector<Rank>{Rank::great, Rank::fair, Rank::poor, Rank::poor});
}

TEST_CASE("best of several references") {
  const std::vector<TokenSequence> refs = {seq({b0, b0, b3}), seq({b0, b1, b3})};
  CHECK(best_of_references(seq({b0, b1, b3}), refs) == 1.0);
  CHECK(best_of_references(seq({b2, b1, b0}), refs) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(best_of_references(seq({b0}), std::span<const TokenSequence>{}), InvalidInput);
}

TEST_CASE("reference sets key by id and require matching words") {
  ReferenceSet set;
  set.add(seq({b0, b1}, "a"));
  set.add(seq({b1, b1}, "a"));
  set.add(seq({b2}, "b"));
  CHECK(set.find("a").size() == 2);
  CHECK(set.find("zzz").empty());
  CHECK_THROWS_AS(set.add(TokenSequence("a", {"p", "q", "r"}, {b0, b0})), InvalidInput);
}
