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

#include "pbrk/bilstm.hpp"

#include <cmath>

#include "pbrk/error.hpp"
#include "pbrk/layers.hpp"

namespace pbrk {

void BiLstmConfig::validate() const {
  if (vocab_size == 0) throw InvalidInput("bilstm: vocab_size must be > 0");
  if (embed_dim == 0) throw InvalidInput("bilstm: embed_dim must be >= 1");
  if (hidden_size == 0) throw InvalidInput("bilstm: hidden_size must be >= 1");
  if (max_len < 2) throw InvalidInput("bilstm: max_len must be >= 2");
}

BiLstmEncoder::BiLstmEncoder(const BiLstmConfig& cfg, ParamSet& params,
                             const std::string& prefix)
    : cfg_(cfg) {
  cfg_.validate();
  const std::size_t e = cfg_.embed_dim;
  const std::size_t h = cfg_.hidden_size;
  emb_ = params.add(prefix + ".emb", {cfg_.vocab_size, e});
  for (auto [dir, name] : {std::pair{&fw_, "fw"}, std::pair{&bw_, "bw"}}) {
    const std::string p = prefix + "." + name + ".";
    dir->w_x = params.add(p + "w_x", {e, 4 * h});
    dir->w_h = params.add(p + "w_h", {h, 4 * h});
    dir->b = params.add(p + "b", {4 * h});
  }
}

void BiLstmEncoder::init(ParamSet& params, Rng& rng) const {
  for (float& x : params[emb_].data()) x = rng.truncated_normal(0.02f);
  const std::size_t h = cfg_.hidden_size;
  for (const Direction* dir : {&fw_, &bw_}) {
    for (float& x : params[dir->w_x].data()) x = rng.truncated_normal(0.02f);
    for (float& x : params[dir->w_h].data()) x = rng.truncated_normal(0.02f);
    Tensor& b = params[dir->b];
    b.fill(0.0f);
    for (std::size_t i = h; i < 2 * h; ++i) b[i] = 1.0f;
  }
}

void BiLstmEncoder::run(const ParamSet& params, const Direction& dir,
                        const Matrix& x, bool reverse,
                        DirectionCache& out) const {
  const Eigen::Index L = x.rows();
  const auto H = static_cast<Eigen::Index>(cfg_.hidden_size);
  Matrix pre(L, 4 * H);
  pre.noalias() = x * params[dir.w_x].mat();
  pre.rowwise() += params[dir.b].vec();
  out.gates.resize(L, 4 * H);
  out.cell.resize(L, H);
  out.hidden.resize(L, H);
  const auto w_h = params[dir.w_h].mat();
  RowVector h_prev = RowVector::Zero(H);
  RowVector c_prev = RowVector::Zero(H);
  for (Eigen::Index s = 0; s < L; ++s) {
    const Eigen::Index t = reverse ? L - 1 - s : s;
    RowVector z = pre.row(t);
    z.noalias() += h_prev * w_h;
    for (Eigen::Index j = 0; j < H; ++j) {
      z[j] = layers::sigmoid(z[j]);
      z[H + j] = layers::sigmoid(z[H + j]);
      z[2 * H + j] = std::tanh(z[2 * H + j]);
      z[3 * H + j] = layers::sigmoid(z[3 * H + j]);
    }
    RowVector c = z.segment(H, H).cwiseProduct(c_prev) +
                  z.segment(0, H).cwiseProduct(z.segment(2 * H, H));
    RowVector h = z.segment(3 * H, H).cwiseProduct(c.array().tanh().matrix());
    out.gates.row(t) = z;
    out.cell.row(t) = c;
    out.hidden.row(t) = h;
    h_prev = h;
    c_prev = c;
  }
}

Matrix BiLstmEncoder::forward(const ParamSet& params,
                              std::span<const std::int32_t> ids,
                              Cache* cache) const {
  const std::size_t len = ids.size();
  if (len == 0) throw InvalidInput("bilstm: empty input");
  if (len > cfg_.max_len)
    throw InvalidInput("bilstm: input length " + std::to_string(len) +
                       " exceeds max_len " + std::to_string(cfg_.max_len));
  for (std::int32_t id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= cfg_.vocab_size)
      throw InvalidInput("bilstm: token id " + std::to_string(id) +
                         " out of range");
  const auto L = static_cast<Eigen::Index>(len);
  const auto H = static_cast<Eigen::Index>(cfg_.hidden_size);
  Matrix x(L, static_cast<Eigen::Index>(cfg_.embed_dim));
  const auto emb = params[emb_].mat();
  for (Eigen::Index t = 0; t < L; ++t) x.row(t) = emb.row(ids[t]);

  Cache local;
  Cache& c = cache ? *cache : local;
  run(params, fw_, x, false, c.fw);
  run(params, bw_, x, true, c.bw);
  Matrix out(L, 2 * H);
  out.leftCols(H) = c.fw.hidden;
  out.rightCols(H) = c.bw.hidden;
  if (cache) {
    cache->ids.assign(ids.begin(), ids.end());
    cache->embedded = std::move(x);
  }
  return out;
}

Matrix BiLstmEncoder::run_backward(const ParamSet& params,
                                   const Direction& dir, const Matrix& x,
                                   bool reverse, const DirectionCache& c,
                                   const Matrix& dh_out,
                                   Gradients& grads) const {
  const Eigen::Index L = x.rows();
  const auto H = static_cast<Eigen::Index>(cfg_.hidden_size);
  const auto w_h = params[dir.w_h].mat();
  auto dw_h = grads[dir.w_h].mat();
  Matrix dpre(L, 4 * H);
  RowVector dh_next = RowVector::Zero(H);
  RowVector dc_next = RowVector::Zero(H);
  for (Eigen::Index s = L; s-- > 0;) {
    const Eigen::Index t = reverse ? L - 1 - s : s;
    const bool has_prev = s > 0;
    const Eigen::Index tp = reverse ? t + 1 : t - 1;
    auto gate = c.gates.row(t);
    RowVector dh = dh_out.row(t) + dh_next;
    RowVector tanh_c = c.cell.row(t).array().tanh();
    RowVector dc = dc_next + dh.cwiseProduct(gate.segment(3 * H, H))
                                 .cwiseProduct((1.0f - tanh_c.array().square()).matrix());
    RowVector c_prev = has_prev ? RowVector(c.cell.row(tp)) : RowVector::Zero(H);
    RowVector dz(4 * H);
    for (Eigen::Index j = 0; j < H; ++j) {
      const float i = gate[j], f = gate[H + j], g = gate[2 * H + j], o = gate[3 * H + j];
      dz[j] = dc[j] * g * i * (1.0f - i);
      dz[H + j] = dc[j] * c_prev[j] * f * (1.0f - f);
      dz[2 * H + j] = dc[j] * i * (1.0f - g * g);
      dz[3 * H + j] = dh[j] * tanh_c[j] * o * (1.0f - o);
    }
    dpre.row(t) = dz;
    if (has_prev) dw_h.noalias() += c.hidden.row(tp).transpose() * dz;
    dh_next.noalias() = dz * w_h.transpose();
    dc_next = dc.cwiseProduct(gate.segment(H, H));
  }
  grads[dir.w_x].mat().noalias() += x.transpose() * dpre;
  grads[dir.b].vec() += dpre.colwise().sum();
  Matrix dx(L, x.cols());
  dx.noalias() = dpre * params[dir.w_x].mat().transpose();
  return dx;
}

void BiLstmEncoder::backward(const ParamSet& params, const Cache& cache,
                             const Matrix& d_hidden, Gradients& grads) const {
  const auto H = static_cast<Eigen::Index>(cfg_.hidden_size);
  Matrix dx = run_backward(params, fw_, cache.embedded, false, cache.fw,
                           d_hidden.leftCols(H), grads);
  dx += run_backward(params, bw_, cache.embedded, true, cache.bw,
                     d_hidden.rightCols(H), grads);
  auto demb = grads[emb_].mat();
  for (std::size_t t = 0; t < cache.ids.size(); ++t)
    demb.row(cache.ids[t]) += dx.row(static_cast<Eigen::Index>(t));
}

}  // namespace pbrk
