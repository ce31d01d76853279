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

#ifndef PBRK_BILSTM_HPP_
#define PBRK_BILSTM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbrk/rng.hpp"
#include "pbrk/tensor.hpp"

namespace pbrk {

struct BiLstmConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 64;
  std::size_t hidden_size = 128;
  std::size_t max_len = 128;

  void validate() const;
  bool operator==(const BiLstmConfig&) const = default;
};

// Embedding followed by one forward and one backward LSTM. Output row t is
// [h_fw(t), h_bw(t)], so the result is L x 2*hidden_size. Gate order in the
// packed weights is input, forget, cell, output.
class BiLstmEncoder {
 public:
  BiLstmEncoder(const BiLstmConfig& cfg, ParamSet& params,
                const std::string& prefix = "lstm");

  // Truncated normal(0.02) weights, zero biases except forget gates at 1.
  void init(ParamSet& params, Rng& rng) const;

  const BiLstmConfig& config() const { return cfg_; }
  std::size_t hidden_size() const { return 2 * cfg_.hidden_size; }

  struct DirectionCache {
    Matrix gates;  // post-activation i, f, g, o per step: L x 4H
    Matrix cell;   // L x H
    Matrix hidden; // L x H
  };
  struct Cache {
    std::vector<std::int32_t> ids;
    Matrix embedded;
    DirectionCache fw, bw;
  };

  Matrix forward(const ParamSet& params, std::span<const std::int32_t> ids,
                 Cache* cache) const;
  void backward(const ParamSet& params, const Cache& cache,
                const Matrix& d_hidden, Gradients& grads) const;

 private:
  struct Direction {
    std::size_t w_x, w_h, b;
  };
  void run(const ParamSet& params, const Direction& dir, const Matrix& x,
           bool reverse, DirectionCache& out) const;
  Matrix run_backward(const ParamSet& params, const Direction& dir,
                      const Matrix& x, bool reverse, const DirectionCache& c,
                      const Matrix& dh_out, Gradients& grads) const;

  BiLstmConfig cfg_;
  std::size_t emb_;
  Direction fw_, bw_;
};

}  // namespace pbrk

#endif  // PBRK_BILSTM_HPP_
