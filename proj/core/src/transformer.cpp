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

#include "pbrk/transformer.hpp"

#include <cmath>
#include <limits>

#include "pbrk/error.hpp"

namespace pbrk {

void EncoderConfig::validate() const {
  if (vocab_size == 0) throw InvalidInput("encoder: vocab_size must be > 0");
  if (d_model == 0 || n_heads == 0 || d_model % n_heads != 0)
    throw InvalidInput("encoder: d_model must be a positive multiple of n_heads");
  if (n_layers == 0) throw InvalidInput("encoder: n_layers must be >= 1");
  if (ffn_dim == 0) throw InvalidInput("encoder: ffn_dim must be >= 1");
  if (max_len < 2) throw InvalidInput("encoder: max_len must be >= 2");
  if (!(dropout_prob >= 0.0f && dropout_prob < 1.0f))
    throw InvalidInput("encoder: dropout_prob must be in [0, 1)");
}

TransformerEncoder::TransformerEncoder(const EncoderConfig& cfg,
                                       ParamSet& params,
                                       const std::string& prefix)
    : cfg_(cfg) {
  cfg_.validate();
  const std::size_t d = cfg_.d_model;
  const std::size_t f = cfg_.ffn_dim;
  tok_emb_ = params.add(prefix + ".tok_emb", {cfg_.vocab_size, d});
  pos_emb_ = params.add(prefix + ".pos_emb", {cfg_.max_len, d});
  for (std::size_t l = 0; l < cfg_.n_layers; ++l) {
    const std::string p = prefix + ".layer" + std::to_string(l) + ".";
    LayerParams lp{};
    lp.ln1_gain = params.add(p + "ln1.gain", {d});
    lp.ln1_bias = params.add(p + "ln1.bias", {d});
    lp.wq = params.add(p + "attn.wq", {d, d});
    lp.bq = params.add(p + "attn.bq", {d});
    lp.wk = params.add(p + "attn.wk", {d, d});
    lp.bk = params.add(p + "attn.bk", {d});
    lp.wv = params.add(p + "attn.wv", {d, d});
    lp.bv = params.add(p + "attn.bv", {d});
    lp.wo = params.add(p + "attn.wo", {d, d});
    lp.bo = params.add(p + "attn.bo", {d});
    lp.ln2_gain = params.add(p + "ln2.gain", {d});
    lp.ln2_bias = params.add(p + "ln2.bias", {d});
    lp.w1 = params.add(p + "ffn.w1", {d, f});
    lp.b1 = params.add(p + "ffn.b1", {f});
    lp.w2 = params.add(p + "ffn.w2", {f, d});
    lp.b2 = params.add(p + "ffn.b2", {d});
    layers_.push_back(lp);
  }
  lnf_gain_ = params.add(prefix + ".ln_final.gain", {d});
  lnf_bias_ = params.add(prefix + ".ln_final.bias", {d});
}

void TransformerEncoder::init(ParamSet& params, Rng& rng) const {
  auto normal = [&](std::size_t i) {
    for (float& x : params[i].data()) x = rng.truncated_normal(0.02f);
  };
  normal(tok_emb_);
  normal(pos_emb_);
  for (const auto& lp : layers_) {
    params[lp.ln1_gain].fill(1.0f);
    params[lp.ln1_bias].fill(0.0f);
    for (std::size_t w : {lp.wq, lp.wk, lp.wv, lp.wo, lp.w1, lp.w2}) normal(w);
    for (std::size_t b : {lp.bq, lp.bk, lp.bv, lp.bo, lp.b1, lp.b2})
      params[b].fill(0.0f);
    params[lp.ln2_gain].fill(1.0f);
    params[lp.ln2_bias].fill(0.0f);
  }
  params[lnf_gain_].fill(1.0f);
  params[lnf_bias_].fill(0.0f);
}

Matrix TransformerEncoder::forward(const ParamSet& params,
                                   std::span<const std::int32_t> ids,
                                   std::span<const std::uint8_t> padding,
                                   Rng* dropout, Cache* cache) const {
  const std::size_t len = ids.size();
  if (len == 0) throw InvalidInput("encoder: empty input");
  if (len > cfg_.max_len)
    throw InvalidInput("encoder: input length " + std::to_string(len) +
                       " exceeds max_len " + std::to_string(cfg_.max_len));
  if (!padding.empty() && padding.size() != len)
    throw InvalidInput("encoder: padding mask length mismatch");
  for (std::int32_t id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= cfg_.vocab_size)
      throw InvalidInput("encoder: token id " + std::to_string(id) +
                         " out of range");

  const auto L = static_cast<Eigen::Index>(len);
  const auto d = static_cast<Eigen::Index>(cfg_.d_model);
  const auto heads = static_cast<Eigen::Index>(cfg_.n_heads);
  const Eigen::Index dh = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  const float p = cfg_.dropout_prob;

  Matrix x(L, d);
  const auto tok = params[tok_emb_].mat();
  const auto pos = params[pos_emb_].mat();
  for (Eigen::Index t = 0; t < L; ++t) x.row(t) = tok.row(ids[t]) + pos.row(t);

  if (cache) {
    cache->ids.assign(ids.begin(), ids.end());
    cache->layers.assign(layers_.size(), {});
  }
  x = layers::dropout(x, p, dropout, cache ? &cache->embed_mask : nullptr);

  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerParams& lp = layers_[l];
    LayerCache local;
    LayerCache& c = cache ? cache->layers[l] : local;

    layers::LayerNormCache ln1;
    Matrix a = layers::layer_norm(x, params[lp.ln1_gain], params[lp.ln1_bias], &ln1);
    Matrix q = layers::linear(a, params[lp.wq], params[lp.bq]);
    Matrix k = layers::linear(a, params[lp.wk], params[lp.bk]);
    Matrix v = layers::linear(a, params[lp.wv], params[lp.bv]);

    Matrix context(L, d);
    std::vector<Matrix> probs(static_cast<std::size_t>(heads));
    for (Eigen::Index h = 0; h < heads; ++h) {
      Matrix s(L, L);
      s.noalias() = q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose();
      s *= scale;
      for (Eigen::Index i = 0; i < L; ++i) {
        float mx = -std::numeric_limits<float>::infinity();
        for (Eigen::Index j = 0; j < L; ++j)
          if (padding.empty() || !padding[j]) mx = std::max(mx, s(i, j));
        double sum = 0.0;
        for (Eigen::Index j = 0; j < L; ++j) {
          const bool masked = !padding.empty() && padding[j];
          const double e = masked ? 0.0 : std::exp(static_cast<double>(s(i, j) - mx));
          s(i, j) = static_cast<float>(e);
          sum += e;
        }
        if (sum > 0.0)
          for (Eigen::Index j = 0; j < L; ++j)
            s(i, j) = static_cast<float>(static_cast<double>(s(i, j)) / sum);
      }
      context.middleCols(h * dh, dh).noalias() = s * v.middleCols(h * dh, dh);
      probs[static_cast<std::size_t>(h)] = std::move(s);
    }
    Matrix attn = layers::linear(context, params[lp.wo], params[lp.bo]);
    attn = layers::dropout(attn, p, dropout, &c.attn_mask);
    Matrix mid = x + attn;

    layers::LayerNormCache ln2;
    Matrix b = layers::layer_norm(mid, params[lp.ln2_gain], params[lp.ln2_bias], &ln2);
    Matrix pre = layers::linear(b, params[lp.w1], params[lp.b1]);
    Matrix act = layers::gelu(pre);
    Matrix ffn = layers::linear(act, params[lp.w2], params[lp.b2]);
    ffn = layers::dropout(ffn, p, dropout, &c.ffn_mask);
    Matrix out = mid + ffn;

    if (cache) {
      c.input = std::move(x);
      c.ln1 = std::move(ln1);
      c.ln1_out = std::move(a);
      c.q = std::move(q);
      c.k = std::move(k);
      c.v = std::move(v);
      c.probs = std::move(probs);
      c.context = std::move(context);
      c.mid = std::move(mid);
      c.ln2 = std::move(ln2);
      c.ln2_out = std::move(b);
      c.ffn_pre = std::move(pre);
      c.ffn_act = std::move(act);
    }
    x = std::move(out);
  }

  layers::LayerNormCache lnf;
  Matrix y = layers::layer_norm(x, params[lnf_gain_], params[lnf_bias_], &lnf);
  if (cache) {
    cache->final_in = std::move(x);
    cache->ln_final = std::move(lnf);
  }
  return y;
}

void TransformerEncoder::backward(const ParamSet& params, const Cache& cache,
                                  const Matrix& d_hidden,
                                  Gradients& grads) const {
  const auto L = static_cast<Eigen::Index>(cache.ids.size());
  const auto d = static_cast<Eigen::Index>(cfg_.d_model);
  const auto heads = static_cast<Eigen::Index>(cfg_.n_heads);
  const Eigen::Index dh = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));

  Matrix dx = layers::layer_norm_backward(d_hidden, cache.ln_final,
                                          params[lnf_gain_], grads[lnf_gain_],
                                          grads[lnf_bias_]);

  for (std::size_t li = layers_.size(); li-- > 0;) {
    const LayerParams& lp = layers_[li];
    const LayerCache& c = cache.layers[li];

    // FFN sub-block.
    Matrix dffn = layers::dropout_backward(dx, c.ffn_mask);
    Matrix dact = layers::linear_backward(dffn, c.ffn_act, params[lp.w2],
                                          grads[lp.w2], grads[lp.b2]);
    Matrix dpre = layers::gelu_backward(dact, c.ffn_pre);
    Matrix dln2 = layers::linear_backward(dpre, c.ln2_out, params[lp.w1],
                                          grads[lp.w1], grads[lp.b1]);
    Matrix dmid = dx + layers::layer_norm_backward(dln2, c.ln2, params[lp.ln2_gain],
                                                   grads[lp.ln2_gain],
                                                   grads[lp.ln2_bias]);

    // Attention sub-block.
    Matrix dattn = layers::dropout_backward(dmid, c.attn_mask);
    Matrix dcontext = layers::linear_backward(dattn, c.context, params[lp.wo],
                                              grads[lp.wo], grads[lp.bo]);
    Matrix dq(L, d), dk(L, d), dv(L, d);
    for (Eigen::Index h = 0; h < heads; ++h) {
      const Matrix& prob = c.probs[static_cast<std::size_t>(h)];
      auto dctx_h = dcontext.middleCols(h * dh, dh);
      Matrix dprob(L, L);
      dprob.noalias() = dctx_h * c.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh).noalias() = prob.transpose() * dctx_h;
      Eigen::VectorXf rowdot = dprob.cwiseProduct(prob).rowwise().sum();
      Matrix ds = prob.cwiseProduct(dprob - rowdot.replicate(1, L));
      ds *= scale;
      dq.middleCols(h * dh, dh).noalias() = ds * c.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh).noalias() = ds.transpose() * c.q.middleCols(h * dh, dh);
    }
    Matrix dln1 = layers::linear_backward(dq, c.ln1_out, params[lp.wq],
                                          grads[lp.wq], grads[lp.bq]);
    dln1 += layers::linear_backward(dk, c.ln1_out, params[lp.wk], grads[lp.wk],
                                    grads[lp.bk]);
    dln1 += layers::linear_backward(dv, c.ln1_out, params[lp.wv], grads[lp.wv],
                                    grads[lp.bv]);
    dx = dmid + layers::layer_norm_backward(dln1, c.ln1, params[lp.ln1_gain],
                                            grads[lp.ln1_gain], grads[lp.ln1_bias]);
  }

  Matrix demb = layers::dropout_backward(dx, cache.embed_mask);
  auto dtok = grads[tok_emb_].mat();
  auto dpos = grads[pos_emb_].mat();
  for (Eigen::Index t = 0; t < L; ++t) {
    dtok.row(cache.ids[static_cast<std::size_t>(t)]) += demb.row(t);
    dpos.row(t) += demb.row(t);
  }
}

}  // namespace pbrk
