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

#ifndef PBRK_DATASET_IO_HPP_
#define PBRK_DATASET_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbrk/corruption.hpp"
#include "pbrk/synth.hpp"
#include "pbrk/tasks.hpp"
#include "pbrk/tokens.hpp"
#include "pbrk/vocab.hpp"

namespace pbrk {

// JSON Lines files. The first line of each is a header object
//   {"format": "pbrk-<kind>", "version": 1, ...}
// and every following non-blank line holds one record. Readers throw
// ParseError naming the file and line.
inline constexpr int kDatasetVersion = 1;

// {"id": ..., "tokens": ["the", "<br0>", "cat"]}
void write_token_sequences(std::ostream& out, std::span<const TokenSequence> seqs);
std::vector<TokenSequence> read_token_sequences(std::istream& in,
                                                std::string_view source = "<tokens>");

// {"id", "ids", "break_mask", "label": 0|1, "edits": [[pos, old, new], ...]}
// with the vocabulary fingerprint in the header.
void write_pretrain_dataset(std::ostream& out, std::span<const LabeledSequence> data,
                            std::uint64_t vocab_fingerprint);
std::vector<LabeledSequence> read_pretrain_dataset(std::istream& in,
                                                   std::string_view source = "<pretrain>");

// {"id", "ids", "break_mask", "overall": 1|2|3, "fine": [1|2|3, ...]};
// overall and fine are each optional.
void write_rated_dataset(std::ostream& out, std::span<const RatedSample> data,
                         std::uint64_t vocab_fingerprint);
std::vector<RatedSample> read_rated_dataset(std::istream& in,
                                            std::string_view source = "<rated>");

// Sidecar for synthetic learner data:
// {"id", "overall", "fine", "rules", "reference": [...tokens]}
void write_ground_truth(std::ostream& out, std::span<const EslSample> data);

std::string hex64(std::uint64_t v);

}  // namespace pbrk

#endif  // PBRK_DATASET_IO_HPP_
