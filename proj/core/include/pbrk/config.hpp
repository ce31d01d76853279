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

#ifndef PBRK_CONFIG_HPP_
#define PBRK_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pbrk/bilstm.hpp"
#include "pbrk/corruption.hpp"
#include "pbrk/synth.hpp"
#include "pbrk/tasks.hpp"
#include "pbrk/transformer.hpp"

namespace pbrk {

// Everything a run depends on. Every stage seed is derived from `seed`, so
// one number reproduces a whole pipeline. vocab_size fields are filled from
// the vocabulary at run time and are not configurable.
struct RunConfig {
  std::uint64_t seed = 17;
  std::uint64_t vocab_min_count = 1;
  SynthConfig synth;
  CorruptionConfig corruption;
  EncoderConfig encoder;
  BiLstmConfig bilstm;
  TrainConfig pretrain;
  TrainConfig finetune = default_finetune();
  std::size_t eval_folds = 5;

  static TrainConfig default_finetune();

  // Re-derives stage seeds (synth, corruption, pretrain, finetune) from
  // `seed`. Called after every change to `seed`.
  void derive_stage_seeds();
  std::uint64_t eval_seed() const;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// JSON object with optional sections "seed", "vocab", "synth",
// "corruption", "encoder", "bilstm", "pretrain", "finetune", "eval".
// Missing keys keep their defaults. Unknown keys throw InvalidInput.
RunConfig parse_run_config(std::string_view json_text, std::string_view source = "<config>");
RunConfig load_run_config(const std::string& path);

// Fully resolved config, deterministic key order.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace pbrk

#endif  // PBRK_CONFIG_HPP_
