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

#include "pbrk/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pbrk/error.hpp"

namespace pbrk {
namespace {

constexpr const char* kReserved[] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]",
                                     "<br0>", "<br1>", "<br2>", "<br3>"};
constexpr std::string_view kVocabMagic = "#pbrk-vocab\t1";

}  // namespace

Vocabulary::Vocabulary() {
  for (const char* t : kReserved) {
    index_.emplace(t, static_cast<std::int32_t>(tokens_.size()));
    tokens_.emplace_back(t);
    counts_.push_back(0);
  }
}

std::int32_t Vocabulary::add_word(const std::string& word, std::uint64_t count) {
  if (word.empty()) throw InvalidInput("vocabulary: empty word");
  auto [it, inserted] =
      index_.emplace(word, static_cast<std::int32_t>(tokens_.size()));
  if (!inserted) throw InvalidInput("vocabulary: duplicate token '" + word + "'");
  tokens_.push_back(word);
  counts_.push_back(count);
  return it->second;
}

std::int32_t Vocabulary::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end() || it->second < kFirstWord) return kUnk;
  return it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return id(word) != kUnk;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw InvalidInput("vocabulary: id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::count(std::int32_t id) const {
  token(id);
  return counts_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::fingerprint() const {
  std::ostringstream os;
  write(os);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void Vocabulary::write(std::ostream& out) const {
  out << kVocabMagic << '\n';
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    out << i << '\t' << tokens_[i] << '\t' << counts_[i] << '\n';
}

Vocabulary Vocabulary::read(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  if (!std::getline(in, line) || line != kVocabMagic)
    throw ParseError(src, 1, "missing vocabulary header");
  Vocabulary v;
  std::size_t line_no = 1;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError(src, line_no, "expected <id>\\t<token>\\t<count>");
    std::size_t id = 0;
    std::uint64_t count = 0;
    auto r1 = std::from_chars(line.data(), line.data() + t1, id);
    auto r2 = std::from_chars(line.data() + t2 + 1, line.data() + line.size(), count);
    if (r1.ec != std::errc() || r1.ptr != line.data() + t1 ||
        r2.ec != std::errc() || r2.ptr != line.data() + line.size())
      throw ParseError(src, line_no, "non-numeric id or count");
    if (id != expected)
      throw ParseError(src, line_no, "ids must be dense and ascending");
    std::string tok = line.substr(t1 + 1, t2 - t1 - 1);
    if (id < static_cast<std::size_t>(kFirstWord)) {
      if (tok != kReserved[id])
        throw ParseError(src, line_no, "reserved id " + std::to_string(id) +
                                           " must be " + kReserved[id]);
      v.counts_[id] = count;
    } else {
      try {
        v.add_word(tok, count);
      } catch (const InvalidInput& e) {
        throw ParseError(src, line_no, e.what());
      }
    }
    ++expected;
  }
  if (expected < static_cast<std::size_t>(kFirstWord))
    throw ParseError(src, line_no, "truncated vocabulary");
  return v;
}

Vocabulary build_vocab(std::span<const TokenSequence> corpus,
                       std::uint64_t min_count) {
  if (corpus.empty()) throw InvalidInput("build_vocab: empty corpus");
  if (min_count < 1) throw InvalidInput("build_vocab: min_count must be >= 1");
  std::map<std::string, std::uint64_t> freq;
  for (const auto& seq : corpus)
    for (const auto& w : seq.words()) ++freq[w];
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(),
                                                            freq.end());
  // freq is already lexicographic, so a stable sort on count keeps ties in
  // lexicographic order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  for (const auto& [word, count] : ranked)
    if (count >= min_count) v.add_word(word, count);
  return v;
}

std::size_t EncodedSequence::num_breaks() const {
  return static_cast<std::size_t>(
      std::count(break_mask.begin(), break_mask.end(), std::uint8_t{1}));
}

EncodedSequence encode(const TokenSequence& seq, const Vocabulary& vocab,
                       std::size_t max_len) {
  if (max_len < 2) throw InvalidInput("encode: max_len must be >= 2");
  EncodedSequence out;
  out.id = seq.id();
  out.vocab_fingerprint = vocab.fingerprint();
  const std::size_t n = std::min(max_len, seq.size() + 1);
  out.ids.reserve(n);
  out.break_mask.reserve(n);
  out.ids.push_back(Vocabulary::kCls);
  out.break_mask.push_back(0);
  const auto& words = seq.words();
  const auto& breaks = seq.breaks();
  for (std::size_t i = 0; i < words.size() && out.ids.size() < n; ++i) {
    out.ids.push_back(vocab.id(words[i]));
    out.break_mask.push_back(0);
    if (i < breaks.size() && out.ids.size() < n) {
      out.ids.push_back(break_id(breaks[i]));
      out.break_mask.push_back(1);
    }
  }
  return out;
}

TokenSequence decode(const EncodedSequence& enc, const Vocabulary& vocab) {
  check_encoded(enc);
  std::vector<std::string> words;
  std::vector<BreakClass> breaks;
  for (std::size_t i = 1; i < enc.ids.size(); ++i) {
    if (enc.break_mask[i]) {
      breaks.push_back(*break_of(enc.ids[i]));
    } else {
      words.push_back(vocab.token(enc.ids[i]));
    }
  }
  if (breaks.size() == words.size() && !breaks.empty()) breaks.pop_back();
  return TokenSequence(enc.id, std::move(words), std::move(breaks));
}

void check_encoded(const EncodedSequence& enc) {
  if (enc.ids.size() != enc.break_mask.size())
    throw InvalidInput("sample '" + enc.id + "': ids and break_mask differ in length");
  if (enc.ids.empty() || enc.ids[0] != Vocabulary::kCls)
    throw InvalidInput("sample '" + enc.id + "': first id must be CLS");
  for (std::size_t i = 0; i < enc.ids.size(); ++i) {
    const bool is_break = break_of(enc.ids[i]).has_value();
    if (is_break != (enc.break_mask[i] != 0))
      throw InvalidInput("sample '" + enc.id + "': break_mask disagrees with ids at " +
                         std::to_string(i));
  }
}

}  // namespace pbrk
