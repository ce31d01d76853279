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

#include <map>

#include "doctest.h"
#include "pbrk/corruption.hpp"
#include "pbrk/error.hpp"
#include "pbrk/rng.hpp"

using namespace pbrk;

namespace {

std::vector<EncodedSequence> random_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EncodedSequence> out;
  for (std::size_t s = 0; s < n; ++s) {
    EncodedSequence e;
    e.id = "s" + std::to_string(s);
    e.ids.push_back(Vocabulary::kCls);
    e.break_mask.push_back(0);
    const std::size_t words = 1 + rng.below(15);
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) {
        e.ids.push_back(break_id(static_cast<BreakClass>(rng.below(4))));
        e.break_mask.push_back(1);
      }
      e.ids.push_back(Vocabulary::kFirstWord + static_cast<std::int32_t>(rng.below(50)));
      e.break_mask.push_back(0);
    }
    e.vocab_fingerprint = 42;
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("corrupt_once only edits breaks and never keeps the same class") {
  const auto corpus = random_corpus(300, 1);
  Rng rng(2);
  for (const auto& seq : corpus) {
    const LabeledSequence out = corrupt_once(seq, 0.5, rng);
    CHECK(out.label == (out.edits.empty() ? SequenceLabel::original : SequenceLabel::corrupted));
    std::size_t differing = 0;
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
      if (seq.ids[i] == out.seq.ids[i]) continue;
      ++differing;
      REQUIRE(seq.break_mask[i] == 1);
      REQUIRE(break_of(out.seq.ids[i]).has_value());
    }
    CHECK(differing == out.edits.size());
    for (const auto& e : out.edits) {
      CHECK(e.before != e.after);
      CHECK(seq.ids[e.position] == break_id(e.before));
      CHECK(out.seq.ids[e.position] == break_id(e.after));
    }
    CHECK(out.seq.break_mask == seq.break_mask);
  }
}

TEST_CASE("replacement classes are uniform over the other three") {
  EncodedSequence seq;
  seq.ids = {Vocabulary::kCls, 8, break_id(BreakClass::br1), 9};
  seq.break_mask = {0, 0, 1, 0};
  Rng rng(9);
  std::map<BreakClass, int> seen;
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++seen[corrupt_once(seq, 1.0, rng).edits.at(0).after];
  CHECK(seen.count(BreakClass::br1) == 0);
  for (BreakClass b : {BreakClass::br0, BreakClass::br2, BreakClass::br3})
    CHECK(seen[b] / double(n) == doctest::Approx(1.0 / 3).epsilon(0.05));
}

TEST_CASE("sequences without breaks can never be corrupted") {
  EncodedSequence seq;
  seq.ids = {Vocabulary::kCls, 8};
  seq.break_mask = {0, 0};
  Rng rng(1);
  const auto out = corrupt_once(seq, 1.0, rng);
  CHECK(out.label == SequenceLabel::original);
  CHECK(out.edits.empty());
}

TEST_CASE("pretraining dataset holds every original plus the attempted copies") {
  const auto corpus = random_corpus(200, 5);
  CorruptionConfig cfg;
  cfg.copies_per_original = 3;
  cfg.seed = 77;
  const auto data = build_pretrain_dataset(corpus, cfg);
  CHECK(data.size() == corpus.size() * 4);
  std::map<std::string, int> originals;
  for (const auto& d : data)
    if (d.seq.id.find('#') == std::string::npos) {
      ++originals[d.seq.id];
      CHECK(d.label == SequenceLabel::original);
      CHECK(d.edits.empty());
    }
  CHECK(originals.size() == corpus.size());
  CHECK(build_pretrain_dataset(corpus, cfg) == data);
  cfg.seed = 78;
  CHECK(build_pretrain_dataset(corpus, cfg) != data);
}

TEST_CASE("corruption config validation") {
  CorruptionConfig cfg;
  cfg.replace_prob = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.replace_prob = 0.15;
  cfg.copies_per_original = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
