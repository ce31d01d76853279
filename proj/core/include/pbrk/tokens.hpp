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

#ifndef PBRK_TOKENS_HPP_
#define PBRK_TOKENS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbrk/alignment.hpp"

namespace pbrk {

// Quantized inter-word silence.
//   br0  (0, 10ms]     no break (zero gaps also land here)
//   br1  (10ms, 50ms]  slight / optional break
//   br2  (50ms, 200ms] break
//   br3  (200ms, inf)  long break
enum class BreakClass : std::uint8_t { br0 = 0, br1 = 1, br2 = 2, br3 = 3 };

inline constexpr int kNumBreakClasses = 4;
inline constexpr std::array<BreakClass, 4> kAllBreakClasses = {
    BreakClass::br0, BreakClass::br1, BreakClass::br2, BreakClass::br3};

constexpr int index_of(BreakClass b) { return static_cast<int>(b); }

// Gap is rounded to whole microseconds before comparing against the upper
// inclusive bounds, so 0.05 computed as 1.05 - 1.0 still lands in br1.
// Throws InvalidInput for negative or NaN gaps.
BreakClass quantize(double gap_seconds);

// "<br0>" .. "<br3>", the spelling used in token files.
std::string_view break_token(BreakClass b);
std::optional<BreakClass> parse_break_token(std::string_view text);

// Lowercases and drops punctuation (internal apostrophes are kept).
// May return an empty string for punctuation-only input.
std::string normalize_word(std::string_view surface);

// w0, b0, w1, ..., b_{n-2}, w_{n-1}. Words and breaks are stored in two
// parallel lists; the interleaved view is produced on demand.
class TokenSequence {
 public:
  using Item = std::variant<std::string, BreakClass>;

  TokenSequence() = default;
  // Throws InvalidInput unless breaks.size() + 1 == words.size() and words
  // is non-empty with whitespace-free, non-empty entries.
  TokenSequence(std::string id, std::vector<std::string> words,
                std::vector<BreakClass> breaks);

  // Parses an interleaved item list, e.g. {"the", "<br0>", "cat"}.
  static TokenSequence from_items(std::string id,
                                  const std::vector<std::string>& items);

  const std::string& id() const { return id_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<BreakClass>& breaks() const { return breaks_; }
  std::vector<BreakClass>& mutable_breaks() { return breaks_; }
  std::size_t size() const { return words_.size() + breaks_.size(); }

  std::vector<Item> items() const;
  // Interleaved spelling with breaks as "<brN>".
  std::vector<std::string> item_strings() const;

  bool operator==(const TokenSequence&) const = default;

 private:
  std::string id_;
  std::vector<std::string> words_;
  std::vector<BreakClass> breaks_;
};

// Normalizes words, drops words that normalize to nothing, then quantizes
// the gaps between surviving words. Throws InvalidInput if no word
// survives.
TokenSequence build_sequence(const AlignedUtterance& utt);

}  // namespace pbrk

#endif  // PBRK_TOKENS_HPP_
