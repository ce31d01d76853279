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

#include "pbrk/tokens.hpp"

#include <cctype>
#include <cmath>

#include "pbrk/error.hpp"

namespace pbrk {

BreakClass quantize(double gap_seconds) {
  if (std::isnan(gap_seconds) || gap_seconds < 0.0)
    throw InvalidInput("quantize: gap must be non-negative");
  if (std::isinf(gap_seconds)) return BreakClass::br3;
  const double us = std::round(gap_seconds * 1e6);
  if (us <= 10'000.0) return BreakClass::br0;
  if (us <= 50'000.0) return BreakClass::br1;
  if (us <= 200'000.0) return BreakClass::br2;
  return BreakClass::br3;
}

std::string_view break_token(BreakClass b) {
  switch (b) {
    case BreakClass::br0: return "<br0>";
    case BreakClass::br1: return "<br1>";
    case BreakClass::br2: return "<br2>";
    case BreakClass::br3: return "<br3>";
  }
  return "<br?>";
}

std::optional<BreakClass> parse_break_token(std::string_view text) {
  for (BreakClass b : kAllBreakClasses)
    if (text == break_token(b)) return b;
  return std::nullopt;
}

std::string normalize_word(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  for (unsigned char c : surface) {
    if (std::isspace(c)) continue;
    if (std::ispunct(c) && c != '\'') continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  std::size_t b = out.find_first_not_of('\'');
  if (b == std::string::npos) return {};
  std::size_t e = out.find_last_not_of('\'');
  return out.substr(b, e - b + 1);
}

TokenSequence::TokenSequence(std::string id, std::vector<std::string> words,
                             std::vector<BreakClass> breaks)
    : id_(std::move(id)), words_(std::move(words)), breaks_(std::move(breaks)) {
  if (words_.empty())
    throw InvalidInput("token sequence '" + id_ + "' has no words");
  if (breaks_.size() + 1 != words_.size())
    throw InvalidInput("token sequence '" + id_ +
                       "': break count must be word count - 1");
  for (const auto& w : words_) {
    if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos)
      throw InvalidInput("token sequence '" + id_ + "': bad word '" + w + "'");
    if (parse_break_token(w))
      throw InvalidInput("token sequence '" + id_ +
                         "': break token in word position");
  }
}

TokenSequence TokenSequence::from_items(std::string id,
                                        const std::vector<std::string>& items) {
  std::vector<std::string> words;
  std::vector<BreakClass> breaks;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i % 2 == 0) {
      words.push_back(items[i]);
    } else {
      auto b = parse_break_token(items[i]);
      if (!b)
        throw InvalidInput("token sequence '" + id + "': item " +
                           std::to_string(i) + " should be a break token");
      breaks.push_back(*b);
    }
  }
  if (!items.empty() && items.size() % 2 == 0)
    throw InvalidInput("token sequence '" + id + "' must end with a word");
  return TokenSequence(std::move(id), std::move(words), std::move(breaks));
}

std::vector<TokenSequence::Item> TokenSequence::items() const {
  std::vector<Item> out;
  out.reserve(size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.emplace_back(words_[i]);
    if (i < breaks_.size()) out.emplace_back(breaks_[i]);
  }
  return out;
}

std::vector<std::string> TokenSequence::item_strings() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.push_back(words_[i]);
    if (i < breaks_.size()) out.emplace_back(break_token(breaks_[i]));
  }
  return out;
}

TokenSequence build_sequence(const AlignedUtterance& utt) {
  validate(utt);
  AlignedUtterance kept{utt.id, {}};
  for (const auto& w : utt.words) {
    std::string norm = normalize_word(w.surface);
    if (norm.empty()) continue;
    kept.words.push_back(AlignedWord{std::move(norm), w.start, w.end});
  }
  if (kept.words.empty())
    throw InvalidInput("utterance '" + utt.id + "' has no lexical words");
  std::vector<std::string> words;
  words.reserve(kept.words.size());
  for (auto& w : kept.words) words.push_back(w.surface);
  std::vector<BreakClass> breaks;
  for (double gap : inter_word_gaps(kept)) breaks.push_back(quantize(gap));
  return TokenSequence(utt.id, std::move(words), std::move(breaks));
}

}  // namespace pbrk
