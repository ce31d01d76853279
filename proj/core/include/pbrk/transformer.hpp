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

#ifndef PBRK_TRANSFORMER_HPP_
#define PBRK_TRANSFORMER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbrk/layers.hpp"
#include "pbrk/rng.hpp"
#include "pbrk/tensor.hpp"

namespace pbrk {

struct EncoderConfig {
  std::size_t vocab_size = 0;
  std::size_t d_model = 128;
  std::size_t n_heads = 4;
  std::size_t n_layers = 2;
  std::size_t ffn_dim = 256;
  std::size_t max_len = 128;
  float dropout_prob = 0.1f;

  void validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

// Pre-LN transformer encoder: token + learned position embeddings, then
// n_layers of [x + MHA(LN(x))] and [x + FFN(LN(x))], then a final LN.
//
// Parameters live in a caller-owned ParamSet under `<prefix>.` names; the
// encoder itself only stores their indices, so forward() can run on any
// ParamSet with the same layout (e.g. a finite-difference copy).
class TransformerEncoder {
 public:
  // Registers parameters in `params` (they start zero-filled).
  TransformerEncoder(const EncoderConfig& cfg, ParamSet& params,
                     const std::string& prefix = "enc");

  // Truncated normal(0.02) weights, zero biases, unit layer-norm gains.
  void init(ParamSet& params, Rng& rng) const;

  const EncoderConfig& config() const { return cfg_; }
  std::size_t hidden_size() const { return cfg_.d_model; }

  struct LayerCache {
    Matrix input;
    layers::LayerNormCache ln1;
    Matrix ln1_out, q, k, v;
    std::vector<Matrix> probs;  // per head, L x L
    Matrix context;             // concatenated heads, L x d
    Matrix attn_mask;
    Matrix mid;
    layers::LayerNormCache ln2;
    Matrix ln2_out, ffn_pre, ffn_act;
    Matrix ffn_mask;
  };
  struct Cache {
    std::vector<std::int32_t> ids;
    Matrix embed_mask;
    std::vector<LayerCache> layers;
    Matrix final_in;
    layers::LayerNormCache ln_final;
  };

  // ids: length L <= max_len, each < vocab_size. padding: empty or length L
  // with 1 marking padded positions, which are excluded as attention keys.
  // Dropout is applied only when `dropout` is non-null. Returns L x d_model.
  // Throws InvalidInput on out-of-range ids or length.
  Matrix forward(const ParamSet& params, std::span<const std::int32_t> ids,
                 std::span<const std::uint8_t> padding, Rng* dropout,
                 Cache* cache) const;

  void backward(const ParamSet& params, const Cache& cache,
                const Matrix& d_hidden, Gradients& grads) const;

 private:
  struct LayerParams {
    std::size_t ln1_gain, ln1_bias;
    std::size_t wq, bq, wk, bk, wv, bv, wo, bo;
    std::size_t ln2_gain, ln2_bias;
    std::size_t w1, b1, w2, b2;
  };

  EncoderConfig cfg_;
  std::size_t tok_emb_, pos_emb_;
  std::vector<LayerParams> layers_;
  std::size_t lnf_gain_, lnf_bias_;
};

}  // namespace pbrk

#endif  // PBRK_TRANSFORMER_HPP_
