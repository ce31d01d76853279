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

#include "pbrk/synth.hpp"

#include <cmath>
#include <cstdio>

#include "pbrk/error.hpp"

namespace pbrk {
namespace {

constexpr std::array<std::string_view, 6> kDet = {"the", "a", "this", "that", "my", "every"};
constexpr std::array<std::string_view, 16> kAdj = {
    "small", "old", "bright", "quiet", "heavy", "young", "green", "warm",
    "strange", "simple", "narrow", "gentle", "broken", "famous", "empty", "clever"};
constexpr std::array<std::string_view, 30> kNoun = {
    "cat", "river", "teacher", "window", "garden", "letter", "village", "doctor",
    "city", "book", "farmer", "bridge", "painting", "student", "market", "station",
    "child", "forest", "lamp", "captain", "kitchen", "song", "island", "engine",
    "neighbour", "basket", "mountain", "writer", "ticket", "horse"};
constexpr std::array<std::string_view, 20> kVerb = {
    "found", "opened", "painted", "watched", "carried", "followed", "closed",
    "visited", "cleaned", "described", "noticed", "repaired", "admired", "sold",
    "borrowed", "remembered", "guarded", "reached", "built", "crossed"};
constexpr std::array<std::string_view, 8> kPrep = {"in", "near", "behind", "under",
                                                   "across", "beside", "through", "with"};
constexpr std::array<std::string_view, 5> kConj = {"and", "but", "so", "because", "while"};
constexpr std::array<std::string_view, 8> kAdv = {"quickly", "slowly", "often", "finally",
                                                  "quietly", "suddenly", "carefully", "never"};

template <std::size_t N>
std::string pick(const std::array<std::string_view, N>& list, Rng& rng) {
  return std::string(list[rng.below(N)]);
}

// Appends words and the sites between them. `lead` is the site joining the
// first new word to whatever precedes it (ignored when nothing does).
class Builder {
 public:
  void word(std::string w, SiteKind lead) {
    if (!words.empty()) sites.push_back(lead);
    words.push_back(std::move(w));
  }
  std::vector<std::string> words;
  std::vector<SiteKind> sites;
};

void noun_phrase(Builder& b, SiteKind lead, Rng& rng) {
  b.word(pick(kDet, rng), lead);
  if (rng.bernoulli(0.4)) b.word(pick(kAdj, rng), SiteKind::inner);
  b.word(pick(kNoun, rng), SiteKind::inner);
}

void clause(Builder& b, SiteKind lead, Rng& rng) {
  noun_phrase(b, lead, rng);
  if (rng.bernoulli(0.3)) {
    b.word(pick(kAdv, rng), SiteKind::optional);
    b.word(pick(kVerb, rng), SiteKind::inner);
  } else {
    b.word(pick(kVerb, rng), SiteKind::optional);
  }
  noun_phrase(b, SiteKind::optional, rng);
  if (rng.bernoulli(0.5)) {
    b.word(pick(kPrep, rng), SiteKind::optional);
    noun_phrase(b, SiteKind::inner, rng);
  }
}

void sentence(Builder& b, SiteKind lead, double comma_rate, Rng& rng) {
  clause(b, lead, rng);
  for (int extra = 0; extra < 2 && rng.bernoulli(comma_rate); ++extra) {
    b.word(pick(kConj, rng), SiteKind::clause);
    clause(b, SiteKind::inner, rng);
  }
}

std::string make_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, i);
  return buf;
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0))
    throw InvalidInput(std::string("synth: ") + name + " must be in [0, 1]");
}

}  // namespace

std::string_view to_string(SiteKind k) {
  switch (k) {
    case SiteKind::inner: return "inner";
    case SiteKind::optional: return "optional";
    case SiteKind::clause: return "clause";
    case SiteKind::sentence: return "sentence";
  }
  return "?";
}

BreakClass canonical_break(SiteKind k) {
  switch (k) {
    case SiteKind::inner: return BreakClass::br0;
    case SiteKind::optional: return BreakClass::br1;
    case SiteKind::clause: return BreakClass::br2;
    case SiteKind::sentence: return BreakClass::br3;
  }
  return BreakClass::br0;
}

std::string_view to_string(BreakRule r) {
  switch (r) {
    case BreakRule::clean: return "clean";
    case BreakRule::alternate: return "alternate";
    case BreakRule::spurious: return "spurious";
    case BreakRule::missed: return "missed";
    case BreakRule::weak: return "weak";
  }
  return "?";
}

void SynthConfig::validate() const {
  if (n_native < 1) throw InvalidInput("synth: n_native must be >= 1");
  if (min_words < 1 || max_words < min_words)
    throw InvalidInput("synth: need 1 <= min_words <= max_words");
  if (max_words < 5)
    throw InvalidInput("synth: max_words must allow one clause (>= 5)");
  check_rate(comma_rate, "comma_rate");
  check_rate(alt_pattern_rate, "alt_pattern_rate");
  check_rate(spurious_rate, "spurious_rate");
  check_rate(missed_rate, "missed_rate");
  check_rate(weak_rate, "weak_rate");
  double sum = 0.0;
  for (double f : class_shape) {
    check_rate(f, "class_shape");
    sum += f;
  }
  if (std::fabs(sum - 1.0) > 1e-6) throw InvalidInput("synth: class_shape must sum to 1");
}

std::vector<BreakClass> render_breaks(std::span<const SiteKind> sites,
                                      double alt_rate, Rng& rng) {
  std::vector<BreakClass> out;
  out.reserve(sites.size());
  for (SiteKind s : sites) {
    if (s == SiteKind::optional && rng.bernoulli(alt_rate))
      out.push_back(BreakClass::br0);
    else
      out.push_back(canonical_break(s));
  }
  return out;
}

std::vector<NativeUtterance> generate_native(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, 101));
  std::vector<NativeUtterance> out;
  out.reserve(cfg.n_native);
  while (out.size() < cfg.n_native) {
    Builder b;
    sentence(b, SiteKind::inner, cfg.comma_rate, rng);
    if (rng.bernoulli(0.5)) sentence(b, SiteKind::sentence, cfg.comma_rate, rng);
    if (b.words.size() < cfg.min_words || b.words.size() > cfg.max_words) continue;
    auto breaks = render_breaks(b.sites, cfg.alt_pattern_rate, rng);
    TokenSequence tokens(make_id("nat", out.size()), std::move(b.words), std::move(breaks));
    out.push_back(NativeUtterance{std::move(tokens), std::move(b.sites)});
  }
  return out;
}

std::vector<TokenSequence> sequences_of(std::span<const NativeUtterance> corpus) {
  std::vector<TokenSequence> out;
  out.reserve(corpus.size());
  for (const auto& u : corpus) out.push_back(u.tokens);
  return out;
}

Rank aggregate_overall(std::span<const Rank> fine) {
  if (fine.empty()) return Rank::great;
  std::size_t poor = 0, great = 0;
  for (Rank r : fine) {
    if (r == Rank::poor) ++poor;
    if (r == Rank::great) ++great;
  }
  const double n = static_cast<double>(fine.size());
  if (static_cast<double>(poor) >= 0.2 * n) return Rank::poor;
  if (poor == 0 && static_cast<double>(great) >= 0.9 * n) return Rank::great;
  return Rank::fair;
}

std::vector<EslSample> generate_esl(const SynthConfig& cfg,
                                    std::span<const NativeUtterance> native) {
  cfg.validate();
  if (native.empty()) throw InvalidInput("generate_esl: empty native corpus");
  std::array<std::size_t, 3> quota{};
  std::size_t assigned = 0;
  for (int c = 0; c < 3; ++c) {
    quota[static_cast<std::size_t>(c)] = static_cast<std::size_t>(
        std::llround(static_cast<double>(cfg.n_esl) * cfg.class_shape[static_cast<std::size_t>(c)]));
    assigned += quota[static_cast<std::size_t>(c)];
  }
  // Rounding slack goes to (or comes from) Great.
  if (assigned > cfg.n_esl) quota[2] -= assigned - cfg.n_esl;
  else quota[2] += cfg.n_esl - assigned;

  Rng rng(derive_seed(cfg.seed, 102));
  std::vector<EslSample> out;
  out.reserve(cfg.n_esl);
  for (std::size_t attempt = 0; out.size() < cfg.n_esl; ++attempt) {
    if (attempt >= cfg.max_attempts)
      throw InvalidInput("generate_esl: class-shape targets not reached after " +
                         std::to_string(cfg.max_attempts) + " attempts");
    const NativeUtterance& text = native[rng.below(native.size())];
    const double severity = rng.bernoulli(0.5) ? 0.0 : 6.0 * std::pow(rng.uniform(), 2.0);
    auto capped = [severity](double rate) { return std::min(1.0, rate * severity); };

    std::vector<BreakClass> breaks = render_breaks(text.sites, cfg.alt_pattern_rate, rng);
    GroundTruth truth;
    for (std::size_t i = 0; i < text.sites.size(); ++i) {
      const SiteKind site = text.sites[i];
      BreakRule rule = breaks[i] == canonical_break(site) ? BreakRule::clean
                                                          : BreakRule::alternate;
      Rank rank = Rank::great;
      if (site == SiteKind::inner) {
        if (rng.bernoulli(capped(cfg.spurious_rate))) {
          breaks[i] = rng.bernoulli(0.5) ? BreakClass::br2 : BreakClass::br3;
          rule = BreakRule::spurious;
          rank = Rank::poor;
        }
      } else if (site == SiteKind::clause || site == SiteKind::sentence) {
        if (rng.bernoulli(capped(cfg.missed_rate))) {
          breaks[i] = BreakClass::br0;
          rule = BreakRule::missed;
          rank = Rank::poor;
        } else if (rng.bernoulli(capped(cfg.weak_rate))) {
          // One class short of the required break.
          breaks[i] = site == SiteKind::clause ? BreakClass::br1 : BreakClass::br2;
          rule = BreakRule::weak;
          rank = Rank::fair;
        }
      }
      truth.fine.push_back(rank);
      truth.rules.push_back(rule);
    }
    truth.overall = aggregate_overall(truth.fine);
    std::size_t& open = quota[static_cast<std::size_t>(rank_index(truth.overall))];
    if (open == 0) continue;
    --open;

    const std::string id = make_id("esl", out.size());
    std::vector<BreakClass> canonical;
    for (SiteKind s : text.sites) canonical.push_back(canonical_break(s));
    out.push_back(EslSample{TokenSequence(id, text.tokens.words(), std::move(breaks)),
                            TokenSequence(id, text.tokens.words(), std::move(canonical)),
                            std::move(truth)});
  }
  return out;
}

CorpusStats corpus_stats(std::span<const TokenSequence> corpus) {
  CorpusStats s;
  for (const auto& seq : corpus) {
    ++s.clips;
    s.words += seq.words().size();
    s.breaks += seq.breaks().size();
    for (BreakClass b : seq.breaks()) ++s.break_classes[static_cast<std::size_t>(index_of(b))];
  }
  return s;
}

CorpusStats corpus_stats(std::span<const EslSample> corpus) {
  CorpusStats s;
  for (const auto& e : corpus) {
    ++s.clips;
    s.words += e.tokens.words().size();
    s.breaks += e.tokens.breaks().size();
    for (BreakClass b : e.tokens.breaks()) ++s.break_classes[static_cast<std::size_t>(index_of(b))];
    ++s.overall[static_cast<std::size_t>(rank_index(e.truth.overall))];
    for (Rank r : e.truth.fine) ++s.fine[static_cast<std::size_t>(rank_index(r))];
  }
  return s;
}

CorpusStats corpus_stats(std::span<const RatedSample> corpus) {
  CorpusStats s;
  for (const auto& r : corpus) {
    ++s.clips;
    for (std::size_t i = 1; i < r.seq.ids.size(); ++i) {
      if (r.seq.break_mask[i]) {
        ++s.breaks;
        ++s.break_classes[static_cast<std::size_t>(index_of(*break_of(r.seq.ids[i])))];
      } else {
        ++s.words;
      }
    }
    if (r.overall) ++s.overall[static_cast<std::size_t>(rank_index(*r.overall))];
    if (r.fine)
      for (Rank k : *r.fine) ++s.fine[static_cast<std::size_t>(rank_index(k))];
  }
  return s;
}

}  // namespace pbrk
