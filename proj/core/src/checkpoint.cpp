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

#include "pbrk/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_convert.hpp"
#include "pbrk/atomic_file.hpp"
#include "pbrk/dataset_io.hpp"

namespace pbrk {
namespace {

using detail::Json;

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in, const std::string& source) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw ParseError(source, 0, "truncated checkpoint");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

Json metadata(const Checkpoint& ckpt) {
  const AssessmentModel& m = ckpt.model;
  Json vocab = Json::array();
  for (std::size_t i = 0; i < ckpt.vocab.size(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    vocab.push_back(Json::array({ckpt.vocab.token(id), ckpt.vocab.count(id)}));
  }
  Json params = Json::array();
  for (std::size_t i = 0; i < m.params().count(); ++i)
    params.push_back(Json{{"name", m.params().name(i)}, {"shape", m.params()[i].shape()}});
  return Json{{"format", "pbrk-checkpoint"},
              {"version", kCheckpointVersion},
              {"backbone", to_string(m.backbone_spec().kind)},
              {"task", to_string(m.task())},
              {"encoder", detail::to_json(m.backbone_spec().encoder)},
              {"bilstm", detail::to_json(m.backbone_spec().bilstm)},
              {"train", detail::to_json(ckpt.train, true)},
              {"seed", ckpt.seed},
              {"origin", ckpt.origin},
              {"vocab_fingerprint", hex64(ckpt.vocab.fingerprint())},
              {"vocab", vocab},
              {"params", params}};
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  const std::string meta = metadata(ckpt).dump();
  out.write(kCheckpointMagic.data(), static_cast<std::streamsize>(kCheckpointMagic.size()));
  put_u64(out, meta.size());
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  const ParamSet& p = ckpt.model.params();
  put_u64(out, p.total_size());
  std::string blob;
  blob.reserve(p.total_size() * 4);
  for (std::size_t i = 0; i < p.count(); ++i) {
    for (float f : p[i].data()) {
      const auto bits = std::bit_cast<std::uint32_t>(f);
      for (int k = 0; k < 4; ++k) blob.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
    }
  }
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  write_file_atomically(path, [&](std::ostream& out) { save_checkpoint(ckpt, out); });
}

Checkpoint load_checkpoint(std::istream& in, const std::string& source,
                           std::optional<TaskKind> expected) {
  std::string magic(kCheckpointMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size())) ||
      magic != kCheckpointMagic)
    throw ParseError(source, 0, "not a pbrk checkpoint (bad magic)");
  const std::uint64_t meta_len = get_u64(in, source);
  if (meta_len > (1ULL << 30)) throw ParseError(source, 0, "implausible metadata length");
  std::string meta(meta_len, '\0');
  if (!in.read(meta.data(), static_cast<std::streamsize>(meta_len)))
    throw ParseError(source, 0, "truncated checkpoint metadata");

  Json j;
  try {
    j = Json::parse(meta);
  } catch (const Json::exception& e) {
    throw ParseError(source, 0, std::string("bad checkpoint metadata: ") + e.what());
  }
  try {
    if (j.at("format") != "pbrk-checkpoint")
      throw ParseError(source, 0, "wrong format marker");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw ParseError(source, 0, "unsupported checkpoint version " +
                                      std::to_string(j.at("version").get<int>()));
    BackboneSpec spec;
    spec.kind = parse_backbone_kind(j.at("backbone").get<std::string>());
    detail::from_json(j.at("encoder"), spec.encoder, "encoder", true);
    detail::from_json(j.at("bilstm"), spec.bilstm, "bilstm", true);
    const TaskKind task = parse_task_kind(j.at("task").get<std::string>());
    if (expected && *expected != task)
      throw InvalidInput(source + ": checkpoint holds a '" + std::string(to_string(task)) +
                         "' model, expected '" + std::string(to_string(*expected)) + "'");

    Vocabulary vocab;
    const auto& tokens = j.at("vocab");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto tok = tokens[i].at(0).get<std::string>();
      const auto count = tokens[i].at(1).get<std::uint64_t>();
      if (i < static_cast<std::size_t>(Vocabulary::kFirstWord)) {
        if (vocab.token(static_cast<std::int32_t>(i)) != tok)
          throw ParseError(source, 0, "reserved vocabulary entry mismatch");
        if (count != 0) throw ParseError(source, 0, "reserved vocabulary count must be 0");
      } else {
        vocab.add_word(tok, count);
      }
    }
    if (hex64(vocab.fingerprint()) != j.at("vocab_fingerprint").get<std::string>())
      throw ParseError(source, 0, "vocabulary fingerprint mismatch");
    if (spec.vocab_size() != vocab.size())
      throw ParseError(source, 0, "backbone vocabulary size does not match vocabulary");

    AssessmentModel model(spec, task);
    const auto& layout = j.at("params");
    ParamSet& params = model.params();
    if (layout.size() != params.count())
      throw ParseError(source, 0, "parameter count does not match the stored configs");
    for (std::size_t i = 0; i < params.count(); ++i) {
      if (layout[i].at("name").get<std::string>() != params.name(i) ||
          layout[i].at("shape").get<std::vector<std::size_t>>() != params[i].shape())
        throw ParseError(source, 0, "parameter '" + params.name(i) +
                                        "' does not match the stored configs");
    }
    const std::uint64_t n_floats = get_u64(in, source);
    if (n_floats != params.total_size())
      throw ParseError(source, 0, "parameter blob size mismatch");
    for (std::size_t i = 0; i < params.count(); ++i) {
      auto data = params[i].data();
      std::string raw(data.size() * 4, '\0');
      if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size())))
        throw ParseError(source, 0, "truncated parameter blob");
      for (std::size_t k = 0; k < data.size(); ++k) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b)
          bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(raw[k * 4 + static_cast<std::size_t>(b)]))
                  << (8 * b);
        data[k] = std::bit_cast<float>(bits);
      }
    }
    if (in.peek() != std::char_traits<char>::eof())
      throw ParseError(source, 0, "trailing bytes after parameter blob");

    TrainConfig train;
    detail::from_json(j.at("train"), train, "train", true);
    return Checkpoint{std::move(model), std::move(vocab), j.at("seed").get<std::uint64_t>(),
                      j.at("origin").get<std::string>(), train};
  } catch (const Json::exception& e) {
    throw ParseError(source, 0, std::string("bad checkpoint metadata: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::string& path, std::optional<TaskKind> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in, path, expected);
}

}  // namespace pbrk
