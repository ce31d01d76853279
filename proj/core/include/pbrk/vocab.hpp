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

#ifndef PBRK_VOCAB_HPP_
#define PBRK_VOCAB_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pbrk/tokens.hpp"

namespace pbrk {

// Whole-word vocabulary. Ids 0..7 are reserved:
//   PAD=0 UNK=1 CLS=2 SEP=3 BR0..BR3=4..7
// Word ids start at 8 in descending frequency, ties lexicographic.
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::int32_t kCls = 2;
  static constexpr std::int32_t kSep = 3;
  static constexpr std::int32_t kBr0 = 4;
  static constexpr std::int32_t kFirstWord = 8;

  Vocabulary();

  // Appends a word with its corpus count. Throws if the word is already
  // present or collides with a reserved spelling.
  std::int32_t add_word(const std::string& word, std::uint64_t count);

  std::int32_t id(std::string_view word) const;  // UNK when absent
  bool contains(std::string_view word) const;
  const std::string& token(std::int32_t id) const;
  std::uint64_t count(std::int32_t id) const;
  std::size_t size() const { return tokens_.size(); }

  // FNV-1a over the serialized form; stored in dataset headers and
  // checkpoints to detect mismatched encodings.
  std::uint64_t fingerprint() const;

  // `#pbrk-vocab\t1` header, then `<id>\t<token>\t<count>` per line.
  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in, std::string_view source = "<vocab>");

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_ && counts_ == o.counts_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::int32_t> index_;
};

constexpr std::int32_t break_id(BreakClass b) {
  return Vocabulary::kBr0 + static_cast<std::int32_t>(b);
}
constexpr std::optional<BreakClass> break_of(std::int32_t id) {
  if (id >= Vocabulary::kBr0 && id < Vocabulary::kBr0 + 4)
    return static_cast<BreakClass>(id - Vocabulary::kBr0);
  return std::nullopt;
}

// Throws InvalidInput on an empty corpus or min_count < 1.
Vocabulary build_vocab(std::span<const TokenSequence> corpus,
                       std::uint64_t min_count = 1);

// Model input: [CLS] followed by word/break ids, plus a parallel mask that
// is 1 exactly at break positions.
struct EncodedSequence {
  std::string id;
  std::vector<std::int32_t> ids;
  std::vector<std::uint8_t> break_mask;
  std::uint64_t vocab_fingerprint = 0;

  std::size_t num_breaks() const;
  bool operator==(const EncodedSequence&) const = default;
};

inline constexpr std::size_t kDefaultMaxLen = 128;

// Truncates to max_len (>= 2). No SEP is appended.
EncodedSequence encode(const TokenSequence& seq, const Vocabulary& vocab,
                       std::size_t max_len = kDefaultMaxLen);

// Inverse of encode up to UNK and truncation. The result ends with a word:
// a trailing break left by truncation is dropped.
TokenSequence decode(const EncodedSequence& enc, const Vocabulary& vocab);

// Throws InvalidInput if ids/mask lengths differ, the first id is not CLS,
// or the mask disagrees with the break ids.
void check_encoded(const EncodedSequence& enc);

}  // namespace pbrk

#endif  // PBRK_VOCAB_HPP_
