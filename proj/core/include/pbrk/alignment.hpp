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

#ifndef PBRK_ALIGNMENT_HPP_
#define PBRK_ALIGNMENT_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbrk {

// One word from a forced alignment. Times are in seconds.
struct AlignedWord {
  std::string surface;
  double start = 0.0;
  double end = 0.0;

  bool operator==(const AlignedWord&) const = default;
};

struct AlignedUtterance {
  std::string id;
  std::vector<AlignedWord> words;

  bool operator==(const AlignedUtterance&) const = default;
};

// Kaldi-style CTM: `<utt-id> <channel> <start-sec> <dur-sec> <word>`.
// Blank lines and lines starting with ";;" or "#" are skipped. Lines of one
// utterance must be contiguous and their start times non-decreasing.
// Throws ParseError naming `source` and the offending line.
std::vector<AlignedUtterance> parse_ctm(std::istream& in,
                                        std::string_view source = "<ctm>");

// Four-column fallback: `<utt-id> <word> <start-sec> <end-sec>`, tab or
// space separated. Same grouping rules as parse_ctm.
std::vector<AlignedUtterance> parse_tsv(std::istream& in,
                                        std::string_view source = "<tsv>");

// Writes utterances back as CTM with channel 1 and six decimals. Times on
// the microsecond grid round trip exactly through parse_ctm.
void write_ctm(std::ostream& out, std::span<const AlignedUtterance> utts);

// gap_i = max(0, start_{i+1} - end_i). Overlapping words clamp to zero.
std::vector<double> inter_word_gaps(const AlignedUtterance& utt);

// Checks the AlignedUtterance invariants; throws InvalidInput.
void validate(const AlignedUtterance& utt);

}  // namespace pbrk

#endif  // PBRK_ALIGNMENT_HPP_
