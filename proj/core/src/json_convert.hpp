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

#ifndef PBRK_SRC_JSON_CONVERT_HPP_
#define PBRK_SRC_JSON_CONVERT_HPP_

// JSON mappings for config structs, shared by the checkpoint and run-config
// readers. Internal to the library.

#include <set>
#include <string>

#include "json.hpp"
#include "pbrk/error.hpp"
#include "pbrk/synth.hpp"
#include "pbrk/tasks.hpp"
#include "pbrk/transformer.hpp"
#include "pbrk/bilstm.hpp"

namespace pbrk::detail {

using Json = nlohmann::ordered_json;

// Rejects keys outside `allowed`.
inline void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key()))
      throw InvalidInput(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline Json to_json(const EncoderConfig& c) {
  return Json{{"vocab_size", c.vocab_size}, {"d_model", c.d_model},
              {"n_heads", c.n_heads},       {"n_layers", c.n_layers},
              {"ffn_dim", c.ffn_dim},       {"max_len", c.max_len},
              {"dropout_prob", c.dropout_prob}};
}

inline void from_json(const Json& j, EncoderConfig& c, const std::string& where,
                      bool allow_vocab_size) {
  if (allow_vocab_size)
    require_keys(j, {"vocab_size", "d_model", "n_heads", "n_layers", "ffn_dim", "max_len",
                     "dropout_prob"}, where);
  else
    require_keys(j, {"d_model", "n_heads", "n_layers", "ffn_dim", "max_len", "dropout_prob"},
                 where);
  read_opt(j, "vocab_size", c.vocab_size);
  read_opt(j, "d_model", c.d_model);
  read_opt(j, "n_heads", c.n_heads);
  read_opt(j, "n_layers", c.n_layers);
  read_opt(j, "ffn_dim", c.ffn_dim);
  read_opt(j, "max_len", c.max_len);
  read_opt(j, "dropout_prob", c.dropout_prob);
}

inline Json to_json(const BiLstmConfig& c) {
  return Json{{"vocab_size", c.vocab_size}, {"embed_dim", c.embed_dim},
              {"hidden_size", c.hidden_size}, {"max_len", c.max_len}};
}

inline void from_json(const Json& j, BiLstmConfig& c, const std::string& where,
                      bool allow_vocab_size) {
  if (allow_vocab_size)
    require_keys(j, {"vocab_size", "embed_dim", "hidden_size", "max_len"}, where);
  else
    require_keys(j, {"embed_dim", "hidden_size", "max_len"}, where);
  read_opt(j, "vocab_size", c.vocab_size);
  read_opt(j, "embed_dim", c.embed_dim);
  read_opt(j, "hidden_size", c.hidden_size);
  read_opt(j, "max_len", c.max_len);
}

inline Json to_json(const TrainConfig& c, bool with_seed) {
  Json j{{"batch_size", c.batch_size}, {"epochs", c.epochs}, {"lr", c.lr},
         {"max_len", c.max_len}, {"class_weights", c.class_weights}};
  if (with_seed) j["seed"] = c.seed;
  return j;
}

inline void from_json(const Json& j, TrainConfig& c, const std::string& where,
                      bool allow_seed) {
  if (allow_seed)
    require_keys(j, {"batch_size", "epochs", "lr", "max_len", "class_weights", "seed"}, where);
  else
    require_keys(j, {"batch_size", "epochs", "lr", "max_len", "class_weights"}, where);
  read_opt(j, "batch_size", c.batch_size);
  read_opt(j, "epochs", c.epochs);
  read_opt(j, "lr", c.lr);
  read_opt(j, "max_len", c.max_len);
  read_opt(j, "class_weights", c.class_weights);
  read_opt(j, "seed", c.seed);
}

inline Json to_json(const SynthConfig& c) {
  return Json{{"n_native", c.n_native},
              {"n_esl", c.n_esl},
              {"min_words", c.min_words},
              {"max_words", c.max_words},
              {"comma_rate", c.comma_rate},
              {"alt_pattern_rate", c.alt_pattern_rate},
              {"spurious_rate", c.spurious_rate},
              {"missed_rate", c.missed_rate},
              {"weak_rate", c.weak_rate},
              {"class_shape", c.class_shape},
              {"max_attempts", c.max_attempts}};
}

inline void from_json(const Json& j, SynthConfig& c, const std::string& where) {
  require_keys(j, {"n_native", "n_esl", "min_words", "max_words", "comma_rate",
                   "alt_pattern_rate", "spurious_rate", "missed_rate", "weak_rate",
                   "class_shape", "max_attempts"}, where);
  read_opt(j, "n_native", c.n_native);
  read_opt(j, "n_esl", c.n_esl);
  read_opt(j, "min_words", c.min_words);
  read_opt(j, "max_words", c.max_words);
  read_opt(j, "comma_rate", c.comma_rate);
  read_opt(j, "alt_pattern_rate", c.alt_pattern_rate);
  read_opt(j, "spurious_rate", c.spurious_rate);
  read_opt(j, "missed_rate", c.missed_rate);
  read_opt(j, "weak_rate", c.weak_rate);
  read_opt(j, "class_shape", c.class_shape);
  read_opt(j, "max_attempts", c.max_attempts);
}

}  // namespace pbrk::detail

#endif  // PBRK_SRC_JSON_CONVERT_HPP_
