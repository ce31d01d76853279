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

#include "pbrk/config.hpp"

#include <fstream>
#include <sstream>

#include "json_convert.hpp"
#include "pbrk/rng.hpp"

namespace pbrk {

using detail::Json;

TrainConfig RunConfig::default_finetune() {
  TrainConfig t;
  t.batch_size = 16;
  t.epochs = 10;
  return t;
}

void RunConfig::derive_stage_seeds() {
  synth.seed = derive_seed(seed, seed_stream::kSynth);
  corruption.seed = derive_seed(seed, seed_stream::kCorruption);
  pretrain.seed = derive_seed(seed, seed_stream::kPretrain);
  finetune.seed = derive_seed(seed, seed_stream::kFinetune);
}

std::uint64_t RunConfig::eval_seed() const { return derive_seed(seed, seed_stream::kEval); }

void RunConfig::validate() const {
  if (vocab_min_count < 1) throw InvalidInput("vocab.min_count must be >= 1");
  if (eval_folds < 2) throw InvalidInput("eval.k must be >= 2");
  synth.validate();
  corruption.validate();
  pretrain.validate();
  finetune.validate();
  EncoderConfig e = encoder;
  e.vocab_size = Vocabulary::kFirstWord + 1;
  e.validate();
  if (bilstm.embed_dim == 0 || bilstm.hidden_size == 0 || bilstm.max_len < 2)
    throw InvalidInput("bilstm dimensions must be positive and max_len >= 2");
}

RunConfig parse_run_config(std::string_view json_text, std::string_view source) {
  const std::string where(source);
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ParseError(where, 0, std::string("invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    detail::require_keys(j, {"seed", "vocab", "synth", "corruption", "encoder", "bilstm",
                             "pretrain", "finetune", "eval"}, where);
    detail::read_opt(j, "seed", cfg.seed);
    cfg.derive_stage_seeds();
    if (j.contains("vocab")) {
      detail::require_keys(j["vocab"], {"min_count"}, where + ": vocab");
      detail::read_opt(j["vocab"], "min_count", cfg.vocab_min_count);
    }
    if (j.contains("synth")) detail::from_json(j["synth"], cfg.synth, where + ": synth");
    if (j.contains("corruption")) {
      detail::require_keys(j["corruption"], {"replace_prob", "copies_per_original"},
                           where + ": corruption");
      detail::read_opt(j["corruption"], "replace_prob", cfg.corruption.replace_prob);
      detail::read_opt(j["corruption"], "copies_per_original",
                       cfg.corruption.copies_per_original);
    }
    if (j.contains("encoder"))
      detail::from_json(j["encoder"], cfg.encoder, where + ": encoder", false);
    if (j.contains("bilstm"))
      detail::from_json(j["bilstm"], cfg.bilstm, where + ": bilstm", false);
    if (j.contains("pretrain"))
      detail::from_json(j["pretrain"], cfg.pretrain, where + ": pretrain", false);
    if (j.contains("finetune"))
      detail::from_json(j["finetune"], cfg.finetune, where + ": finetune", false);
    if (j.contains("eval")) {
      detail::require_keys(j["eval"], {"k"}, where + ": eval");
      detail::read_opt(j["eval"], "k", cfg.eval_folds);
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(where + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

std::string dump_run_config(const RunConfig& cfg) {
  Json enc = detail::to_json(cfg.encoder);
  enc.erase("vocab_size");
  Json lstm = detail::to_json(cfg.bilstm);
  lstm.erase("vocab_size");
  Json j{{"seed", cfg.seed},
         {"vocab", {{"min_count", cfg.vocab_min_count}}},
         {"synth", detail::to_json(cfg.synth)},
         {"corruption",
          {{"replace_prob", cfg.corruption.replace_prob},
           {"copies_per_original", cfg.corruption.copies_per_original}}},
         {"encoder", enc},
         {"bilstm", lstm},
         {"pretrain", detail::to_json(cfg.pretrain, false)},
         {"finetune", detail::to_json(cfg.finetune, false)},
         {"eval", {{"k", cfg.eval_folds}}}};
  return j.dump(2) + "\n";
}

}  // namespace pbrk
