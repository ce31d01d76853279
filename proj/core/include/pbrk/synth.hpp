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

#ifndef PBRK_SYNTH_HPP_
#define PBRK_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbrk/rng.hpp"
#include "pbrk/tasks.hpp"
#include "pbrk/tokens.hpp"

namespace pbrk {

// Desk-scale stand-ins for the native (well-phrased) and learner corpora.
// Sentences come from a small grammar over a closed word list:
//
//   utterance := sentence (sentence)?
//   sentence  := clause ("," conj clause)*
//   clause    := np adv? verb np pp?
//   np        := det adj? noun          pp := prep np
//
// Every gap between words is a site with a fixed role.
enum class SiteKind : std::uint8_t {
  inner,     // inside a phrase: br0
  optional,  // phrase boundary inside a clause: br1, or br0 as the alternate
  clause,    // before a conjunction: br2
  sentence,  // between sentences: br3
};

std::string_view to_string(SiteKind k);
BreakClass canonical_break(SiteKind k);

struct SynthConfig {
  std::size_t n_native = 2000;
  std::size_t n_esl = 800;
  std::size_t min_words = 6;
  std::size_t max_words = 30;
  double comma_rate = 0.6;        // chance of appending another clause
  double alt_pattern_rate = 0.5;  // chance an optional site takes br0
  double spurious_rate = 0.03;    // inner site -> br2/br3 (Poor)
  double missed_rate = 0.1;       // clause/sentence site -> br0 (Poor)
  double weak_rate = 0.8;         // clause -> br1, sentence -> br2 (Fair)
  // Target fractions of Poor, Fair, Great overall ranks.
  std::array<double, 3> class_shape = {21.0 / 800.0, 136.0 / 800.0, 643.0 / 800.0};
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1'000'000;

  void validate() const;
  bool operator==(const SynthConfig&) const = default;
};

// A text plus the role of each gap, and one rendering of its breaks.
struct NativeUtterance {
  TokenSequence tokens;
  std::vector<SiteKind> sites;
};

// Draws breaks for a site list: fixed classes for inner/clause/sentence,
// and for each optional site br0 with probability alt_rate, else br1.
std::vector<BreakClass> render_breaks(std::span<const SiteKind> sites,
                                      double alt_rate, Rng& rng);

std::vector<NativeUtterance> generate_native(const SynthConfig& cfg);

std::vector<TokenSequence> sequences_of(std::span<const NativeUtterance> corpus);

enum class BreakRule : std::uint8_t { clean, alternate, spurious, missed, weak };
std::string_view to_string(BreakRule r);

struct GroundTruth {
  Rank overall = Rank::great;
  std::vector<Rank> fine;
  std::vector<BreakRule> rules;  // what produced each break label
};

struct EslSample {
  TokenSequence tokens;
  TokenSequence reference;  // canonical rendering of the same text
  GroundTruth truth;
};

// Poor if at least 20% of positions are Poor; Great if at least 90% are
// Great and none is Poor; otherwise Fair. No positions counts as Great.
Rank aggregate_overall(std::span<const Rank> fine);

// Draws learner renditions of texts from `native` and injects labeled
// errors with a per-sample severity, accepting a sample only while its
// overall rank's quota is open. Quotas are round(n_esl * class_shape).
// Throws InvalidInput if the quotas are not filled within max_attempts.
std::vector<EslSample> generate_esl(const SynthConfig& cfg,
                                    std::span<const NativeUtterance> native);

struct CorpusStats {
  std::size_t clips = 0;
  std::size_t words = 0;
  std::size_t breaks = 0;
  std::array<std::size_t, 4> break_classes{};
  std::array<std::size_t, 3> overall{};  // Poor, Fair, Great
  std::array<std::size_t, 3> fine{};

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(std::span<const TokenSequence> corpus);
CorpusStats corpus_stats(std::span<const EslSample> corpus);
// Word counts exclude CLS; break classes are read from the ids.
CorpusStats corpus_stats(std::span<const RatedSample> corpus);

}  // namespace pbrk

#endif  // PBRK_SYNTH_HPP_
