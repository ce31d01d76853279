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

#include "pbrk/dataset_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "pbrk/error.hpp"

namespace pbrk {
namespace {

using Json = nlohmann::ordered_json;

void write_header(std::ostream& out, const char* kind, const std::uint64_t* fingerprint) {
  Json h{{"format", std::string("pbrk-") + kind}, {"version", kDatasetVersion}};
  if (fingerprint) h["vocab"] = hex64(*fingerprint);
  out << h.dump() << '\n';
}

std::uint64_t parse_hex64(const std::string& s, std::string_view source, std::size_t line) {
  if (s.size() != 16) throw ParseError(std::string(source), line, "bad vocab fingerprint");
  std::uint64_t v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else throw ParseError(std::string(source), line, "bad vocab fingerprint");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

// Iterates the records of a JSON Lines file after checking its header.
class Reader {
 public:
  Reader(std::istream& in, std::string_view source, const char* kind)
      : in_(in), source_(source) {
    Json h;
    if (!next(h)) fail("missing header");
    header_line_ = line_;
    if (!h.is_object() || !h.contains("format") ||
        h["format"] != std::string("pbrk-") + kind)
      fail(std::string("expected format pbrk-") + kind);
    if (!h.contains("version") || !h["version"].is_number_integer() ||
        h["version"].get<int>() != kDatasetVersion)
      fail("unsupported version");
    header_ = std::move(h);
  }

  bool next(Json& record) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        record = Json::parse(text);
      } catch (const Json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
      }
      return true;
    }
    return false;
  }

  std::uint64_t fingerprint() {
    if (!header_.contains("vocab") || !header_["vocab"].is_string()) {
      line_ = header_line_;
      fail("header lacks a vocab fingerprint");
    }
    return parse_hex64(header_["vocab"].get<std::string>(), source_, header_line_);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::string(source_), line_, what);
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string_view source_;
  std::size_t line_ = 0;
  std::size_t header_line_ = 0;
  Json header_;
};

Json encoded_fields(const EncodedSequence& s) {
  Json mask = Json::array();
  for (auto m : s.break_mask) mask.push_back(m != 0);
  return Json{{"id", s.id}, {"ids", s.ids}, {"break_mask", mask}};
}

EncodedSequence read_encoded(const Json& r, std::uint64_t fp) {
  EncodedSequence s;
  s.id = r.at("id").get<std::string>();
  s.ids = r.at("ids").get<std::vector<std::int32_t>>();
  for (const auto& m : r.at("break_mask")) s.break_mask.push_back(m.get<bool>() ? 1 : 0);
  s.vocab_fingerprint = fp;
  check_encoded(s);
  return s;
}

// Runs `body`, turning JSON type errors and invariant violations into a
// ParseError at the reader's current line.
template <class F>
void guarded(Reader& reader, F&& body) {
  try {
    body();
  } catch (const Json::exception& e) {
    reader.fail(e.what());
  } catch (const InvalidInput& e) {
    reader.fail(e.what());
  }
}

BreakClass break_from_int(int v) {
  if (v < 0 || v >= kNumBreakClasses) throw InvalidInput("break class out of range");
  return static_cast<BreakClass>(v);
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_token_sequences(std::ostream& out, std::span<const TokenSequence> seqs) {
  write_header(out, "tokens", nullptr);
  for (const auto& s : seqs)
    out << Json{{"id", s.id()}, {"tokens", s.item_strings()}}.dump() << '\n';
}

std::vector<TokenSequence> read_token_sequences(std::istream& in, std::string_view source) {
  Reader reader(in, source, "tokens");
  std::vector<TokenSequence> out;
  Json r;
  while (reader.next(r)) {
    guarded(reader, [&] {
      out.push_back(TokenSequence::from_items(r.at("id").get<std::string>(),
                                              r.at("tokens").get<std::vector<std::string>>()));
    });
  }
  return out;
}

void write_pretrain_dataset(std::ostream& out, std::span<const LabeledSequence> data,
                            std::uint64_t vocab_fingerprint) {
  write_header(out, "pretrain", &vocab_fingerprint);
  for (const auto& d : data) {
    Json j = encoded_fields(d.seq);
    j["label"] = static_cast<int>(d.label);
    Json edits = Json::array();
    for (const auto& e : d.edits)
      edits.push_back(Json::array({e.position, index_of(e.before), index_of(e.after)}));
    j["edits"] = edits;
    out << j.dump() << '\n';
  }
}

std::vector<LabeledSequence> read_pretrain_dataset(std::istream& in, std::string_view source) {
  Reader reader(in, source, "pretrain");
  const std::uint64_t fp = reader.fingerprint();
  std::vector<LabeledSequence> out;
  Json r;
  while (reader.next(r)) {
    guarded(reader, [&] {
      LabeledSequence d;
      d.seq = read_encoded(r, fp);
      const int label = r.at("label").get<int>();
      if (label != 0 && label != 1) throw InvalidInput("label must be 0 or 1");
      d.label = static_cast<SequenceLabel>(label);
      for (const auto& e : r.at("edits")) {
        if (!e.is_array() || e.size() != 3) throw InvalidInput("edit must be [pos, old, new]");
        BreakEdit edit{e[0].get<std::size_t>(), break_from_int(e[1].get<int>()),
                       break_from_int(e[2].get<int>())};
        if (edit.position >= d.seq.ids.size() || !d.seq.break_mask[edit.position])
          throw InvalidInput("edit position is not a break");
        if (d.seq.ids[edit.position] != break_id(edit.after))
          throw InvalidInput("edit disagrees with the stored break");
        d.edits.push_back(edit);
      }
      if ((d.label == SequenceLabel::corrupted) != !d.edits.empty())
        throw InvalidInput("label disagrees with the edit list");
      out.push_back(std::move(d));
    });
  }
  return out;
}

void write_rated_dataset(std::ostream& out, std::span<const RatedSample> data,
                         std::uint64_t vocab_fingerprint) {
  write_header(out, "rated", &vocab_fingerprint);
  for (const auto& d : data) {
    Json j = encoded_fields(d.seq);
    if (d.overall) j["overall"] = static_cast<int>(*d.overall);
    if (d.fine) {
      Json fine = Json::array();
      for (Rank r : *d.fine) fine.push_back(static_cast<int>(r));
      j["fine"] = fine;
    }
    out << j.dump() << '\n';
  }
}

std::vector<RatedSample> read_rated_dataset(std::istream& in, std::string_view source) {
  Reader reader(in, source, "rated");
  const std::uint64_t fp = reader.fingerprint();
  std::vector<RatedSample> out;
  Json r;
  while (reader.next(r)) {
    guarded(reader, [&] {
      RatedSample s;
      s.seq = read_encoded(r, fp);
      if (r.contains("overall")) s.overall = rank_from_int(r["overall"].get<int>());
      if (r.contains("fine")) {
        std::vector<Rank> fine;
        for (const auto& v : r["fine"]) fine.push_back(rank_from_int(v.get<int>()));
        s.fine = std::move(fine);
      }
      validate(s);
      out.push_back(std::move(s));
    });
  }
  return out;
}

void write_ground_truth(std::ostream& out, std::span<const EslSample> data) {
  write_header(out, "truth", nullptr);
  for (const auto& d : data) {
    Json fine = Json::array(), rules = Json::array();
    for (Rank r : d.truth.fine) fine.push_back(static_cast<int>(r));
    for (BreakRule r : d.truth.rules) rules.push_back(std::string(to_string(r)));
    out << Json{{"id", d.tokens.id()},
                {"overall", static_cast<int>(d.truth.overall)},
                {"fine", fine},
                {"rules", rules},
                {"reference", d.reference.item_strings()}}
               .dump()
        << '\n';
  }
}

}  // namespace pbrk
