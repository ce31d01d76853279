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

#include "pbrk/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "pbrk/error.hpp"

namespace pbrk {
namespace {

// Alignment times are kept on a microsecond grid so that write/parse round
// trips reproduce the same doubles.
double snap_us(double seconds) { return std::round(seconds * 1e6) / 1e6; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool skippable(std::string_view line) {
  std::size_t i = line.find_first_not_of(" \t\r");
  if (i == std::string_view::npos) return true;
  line.remove_prefix(i);
  return line.starts_with(";;") || line.starts_with('#');
}

double parse_seconds(std::string_view text, std::string_view what,
                     const std::string& source, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ParseError(source, line_no,
                     "non-numeric " + std::string(what) + " '" +
                         std::string(text) + "'");
  }
  return value;
}

// Shared grouping logic for both formats.
class UtteranceCollector {
 public:
  explicit UtteranceCollector(std::string source) : source_(std::move(source)) {}

  void add(std::string_view id, std::string_view word, double start, double end,
           std::size_t line_no) {
    if (start < 0.0)
      throw ParseError(source_, line_no, "negative start time");
    if (end < start)
      throw ParseError(source_, line_no, "negative duration");
    if (out_.empty() || out_.back().id != id) {
      if (!seen_.insert(std::string(id)).second) {
        throw ParseError(source_, line_no,
                         "utterance '" + std::string(id) +
                             "' is not contiguous");
      }
      out_.push_back(AlignedUtterance{std::string(id), {}});
    }
    auto& words = out_.back().words;
    if (!words.empty() && start < words.back().start) {
      throw ParseError(source_, line_no,
                       "start time decreases within utterance '" +
                           std::string(id) + "'");
    }
    words.push_back(AlignedWord{std::string(word), start, end});
  }

  std::vector<AlignedUtterance> take() { return std::move(out_); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<AlignedUtterance> out_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

std::vector<AlignedUtterance> parse_ctm(std::istream& in,
                                        std::string_view source) {
  UtteranceCollector collector{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto f = split_ws(line);
    // Some CTM writers append a confidence column.
    if (f.size() != 5 && f.size() != 6) {
      throw ParseError(collector.source(), line_no,
                       "expected 5 fields, got " + std::to_string(f.size()));
    }
    double start = parse_seconds(f[2], "start", collector.source(), line_no);
    double dur = parse_seconds(f[3], "duration", collector.source(), line_no);
    if (dur < 0.0)
      throw ParseError(collector.source(), line_no, "negative duration");
    if (f.size() == 6)
      parse_seconds(f[5], "confidence", collector.source(), line_no);
    collector.add(f[0], f[4], snap_us(start), snap_us(start + dur), line_no);
  }
  return collector.take();
}

std::vector<AlignedUtterance> parse_tsv(std::istream& in,
                                        std::string_view source) {
  UtteranceCollector collector{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto f = split_ws(line);
    if (f.size() != 4) {
      throw ParseError(collector.source(), line_no,
                       "expected 4 fields, got " + std::to_string(f.size()));
    }
    double start = parse_seconds(f[2], "start", collector.source(), line_no);
    double end = parse_seconds(f[3], "end", collector.source(), line_no);
    collector.add(f[0], f[1], snap_us(start), snap_us(end), line_no);
  }
  return collector.take();
}

void write_ctm(std::ostream& out, std::span<const AlignedUtterance> utts) {
  char buf[64];
  for (const auto& utt : utts) {
    for (const auto& w : utt.words) {
      out << utt.id << " 1 ";
      std::snprintf(buf, sizeof buf, "%.6f %.6f ", w.start, w.end - w.start);
      out << buf << w.surface << '\n';
    }
  }
}

std::vector<double> inter_word_gaps(const AlignedUtterance& utt) {
  std::vector<double> gaps;
  if (utt.words.size() < 2) return gaps;
  gaps.reserve(utt.words.size() - 1);
  for (std::size_t i = 0; i + 1 < utt.words.size(); ++i) {
    gaps.push_back(std::max(0.0, utt.words[i + 1].start - utt.words[i].end));
  }
  return gaps;
}

void validate(const AlignedUtterance& utt) {
  if (utt.words.empty())
    throw InvalidInput("utterance '" + utt.id + "' has no words");
  for (std::size_t i = 0; i < utt.words.size(); ++i) {
    const auto& w = utt.words[i];
    if (w.surface.empty() ||
        w.surface.find_first_of(" \t\r\n") != std::string::npos)
      throw InvalidInput("utterance '" + utt.id + "': bad word surface");
    if (!(w.start >= 0.0) || !(w.end >= w.start))
      throw InvalidInput("utterance '" + utt.id + "': bad word times");
    if (i > 0 && w.start < utt.words[i - 1].start)
      throw InvalidInput("utterance '" + utt.id + "': non-monotone starts");
  }
}

}  // namespace pbrk
