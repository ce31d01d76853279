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

#include <cmath>

#include "doctest.h"
#include "pbrk/adam.hpp"
#include "pbrk/bilstm.hpp"
#include "pbrk/error.hpp"
#include "pbrk/layers.hpp"
#include "pbrk/loss.hpp"
#include "pbrk/model.hpp"
#include "pbrk/rng.hpp"
#include "pbrk/transformer.hpp"
#include "pbrk/vocab.hpp"

using namespace pbrk;

namespace {

std::vector<std::int32_t> random_ids(Rng& rng, std::size_t n, std::size_t vocab) {
  std::vector<std::int32_t> ids{Vocabulary::kCls};
  while (ids.size() < n) ids.push_back(static_cast<std::int32_t>(4 + rng.below(vocab - 4)));
  return ids;
}

void randomize(ParamSet& p, Rng& rng, float sd) {
  for (std::size_t i = 0; i < p.count(); ++i)
    for (float& x : p[i].data()) x = rng.normal(0.0f, sd);
}

EncoderConfig small_encoder() {
  EncoderConfig c;
  c.vocab_size = 20;
  c.d_model = 16;
  c.n_heads = 4;
  c.n_layers = 2;
  c.ffn_dim = 24;
  c.max_len = 16;
  return c;
}

}  // namespace

TEST_CASE("softmax and cross-entropy") {
  const std::vector<float> logits = {1.0f, 2.0f, 3.0f};
  const auto p = softmax(logits);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(p[2] == doctest::Approx(std::exp(3.0) / z));
  const LossResult r = softmax_cross_entropy(logits, 0, 2.0f);
  CHECK(r.loss == doctest::Approx(-2.0 * std::log(std::exp(1.0) / z)));
  CHECK(r.grad[0] == doctest::Approx(2.0 * (p[0] - 1.0)));
  CHECK(r.grad[1] == doctest::Approx(2.0 * p[1]));
  // Large logits stay finite.
  const std::vector<float> big = {1000.0f, -1000.0f};
  CHECK(std::isfinite(softmax_cross_entropy(big, 1).loss));
  CHECK_THROWS_AS(softmax_cross_entropy(logits, 3), InvalidInput);
}

TEST_CASE("layer norm output has zero mean and unit variance per row") {
  Rng rng(4);
  Matrix x(5, 32);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal(3.0f, 2.0f);
  Tensor gain({32}, 1.0f), bias({32}, 0.0f);
  layers::LayerNormCache cache;
  const Matrix y = layers::layer_norm(x, gain, bias, &cache);
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    const double mean = y.row(r).cast<double>().mean();
    const double var = (y.row(r).cast<double>().array() - mean).square().mean();
    CHECK(std::abs(mean) < 1e-5);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("attention rows are distributions and ignore padded keys") {
  EncoderConfig cfg = small_encoder();
  ParamSet params;
  TransformerEncoder enc(cfg, params);
  Rng rng(8);
  randomize(params, rng, 0.3f);
  const auto ids = random_ids(rng, 9, cfg.vocab_size);
  std::vector<std::uint8_t> pad(9, 0);
  pad[7] = pad[8] = 1;
  TransformerEncoder::Cache cache;
  enc.forward(params, ids, pad, nullptr, &cache);
  for (const auto& layer : cache.layers) {
    REQUIRE(layer.probs.size() == cfg.n_heads);
    for (const Matrix& p : layer.probs) {
      for (Eigen::Index r = 0; r < p.rows(); ++r) {
        CHECK(p.row(r).sum() == doctest::Approx(1.0f).epsilon(1e-5));
        CHECK((p.row(r).array() >= 0.0f).all());
        CHECK(p(r, 7) == 0.0f);
        CHECK(p(r, 8) == 0.0f);
      }
    }
  }
}

TEST_CASE("appending padded positions leaves real positions unchanged") {
  EncoderConfig cfg = small_encoder();
  ParamSet params;
  TransformerEncoder enc(cfg, params);
  Rng rng(12);
  randomize(params, rng, 0.3f);
  auto ids = random_ids(rng, 6, cfg.vocab_size);
  const Matrix base = enc.forward(params, ids, {}, nullptr, nullptr);
  ids.resize(10, Vocabulary::kPad);
  std::vector<std::uint8_t> pad(10, 0);
  for (std::size_t i = 6; i < 10; ++i) pad[i] = 1;
  const Matrix padded = enc.forward(params, ids, pad, nullptr, nullptr);
  CHECK((padded.topRows(6) - base).cwiseAbs().maxCoeff() < 1e-5f);
}

TEST_CASE("encoder rejects out-of-range input") {
  EncoderConfig cfg = small_encoder();
  ParamSet params;
  TransformerEncoder enc(cfg, params);
  std::vector<std::int32_t> ids(cfg.max_len + 1, 4);
  CHECK_THROWS_AS(enc.forward(params, ids, {}, nullptr, nullptr), InvalidInput);
  std::vector<std::int32_t> bad = {2, static_cast<std::int32_t>(cfg.vocab_size)};
  CHECK_THROWS_AS(enc.forward(params, bad, {}, nullptr, nullptr), InvalidInput);
}

TEST_CASE("dropout is inactive without an rng and seeded with one") {
  EncoderConfig cfg = small_encoder();
  cfg.dropout_prob = 0.5f;
  ParamSet params;
  TransformerEncoder enc(cfg, params);
  Rng rng(3);
  enc.init(params, rng);
  const auto ids = random_ids(rng, 8, cfg.vocab_size);
  const Matrix a = enc.forward(params, ids, {}, nullptr, nullptr);
  CHECK(a == enc.forward(params, ids, {}, nullptr, nullptr));
  Rng d1(5), d2(5);
  const Matrix b = enc.forward(params, ids, {}, &d1, nullptr);
  CHECK(b == enc.forward(params, ids, {}, &d2, nullptr));
  CHECK(b != a);
}

TEST_CASE("Bi-LSTM backward direction is the forward direction on reversed input") {
  BiLstmConfig cfg;
  cfg.vocab_size = 15;
  cfg.embed_dim = 6;
  cfg.hidden_size = 5;
  ParamSet params;
  BiLstmEncoder lstm(cfg, params);
  Rng rng(21);
  randomize(params, rng, 0.4f);
  for (const char* t : {"w_x", "w_h", "b"})
    params[params.index(std::string("lstm.bw.") + t)] = params[params.index(std::string("lstm.fw.") + t)];
  const auto ids = random_ids(rng, 7, cfg.vocab_size);
  const std::vector<std::int32_t> rev(ids.rbegin(), ids.rend());
  const Matrix a = lstm.forward(params, ids, nullptr);
  const Matrix b = lstm.forward(params, rev, nullptr);
  REQUIRE(a.cols() == 10);
  const Eigen::Index h = 5, n = a.rows();
  for (Eigen::Index t = 0; t < n; ++t)
    CHECK((a.row(t).leftCols(h) - b.row(n - 1 - t).rightCols(h)).cwiseAbs().maxCoeff() < 1e-6f);
}

TEST_CASE("Bi-LSTM forget-gate bias starts at one") {
  BiLstmConfig cfg;
  cfg.vocab_size = 10;
  cfg.embed_dim = 4;
  cfg.hidden_size = 3;
  ParamSet params;
  BiLstmEncoder lstm(cfg, params);
  Rng rng(1);
  lstm.init(params, rng);
  const Tensor& b = params[params.index("lstm.fw.b")];
  for (std::size_t i = 0; i < 12; ++i) CHECK(b[i] == (i >= 3 && i < 6 ? 1.0f : 0.0f));
}

TEST_CASE("Adam matches an independent double-precision reference") {
  ParamSet p;
  p.add("w", {3, 2});
  Rng rng(6);
  randomize(p, rng, 1.0f);
  const AdamConfig cfg{0.01f, 0.9f, 0.999f, 1e-8f};
  Adam opt(p, cfg);
  std::vector<double> ref(p[0].data().begin(), p[0].data().end()), m(6, 0.0), v(6, 0.0);
  for (int t = 1; t <= 25; ++t) {
    Gradients g = p.zeros_like();
    for (float& x : g[0].data()) x = rng.normal(0.0f, 1.0f);
    opt.step(p, g);
    for (std::size_t i = 0; i < 6; ++i) {
      const double gi = g[0][i];
      m[i] = 0.9 * m[i] + 0.1 * gi;
      v[i] = 0.999 * v[i] + 0.001 * gi * gi;
      const double mh = m[i] / (1 - std::pow(0.9, t));
      const double vh = v[i] / (1 - std::pow(0.999, t));
      ref[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    }
  }
  CHECK(opt.steps() == 25);
  for (std::size_t i = 0; i < 6; ++i) CHECK(p[0][i] == doctest::Approx(ref[i]).epsilon(1e-5));
  Tensor wrong({2});
  CHECK_THROWS_AS(adam_step(p[0], wrong, wrong, wrong, cfg, 1), InvalidInput);
}

TEST_CASE("model heads produce the documented logit shapes") {
  BackboneSpec spec;
  spec.encoder = small_encoder();
  spec.bilstm.vocab_size = spec.encoder.vocab_size;
  spec.bilstm.embed_dim = 4;
  spec.bilstm.hidden_size = 3;
  Rng rng(2);
  const auto ids = random_ids(rng, 7, spec.encoder.vocab_size);
  for (BackboneKind kind : {BackboneKind::transformer, BackboneKind::bilstm}) {
    spec.kind = kind;
    AssessmentModel disc(spec, TaskKind::discriminator);
    AssessmentModel fine(spec, TaskKind::finegrained);
    disc.init(1);
    fine.init(1);
    CHECK(disc.logits(ids).rows() == 1);
    CHECK(disc.logits(ids).cols() == 2);
    CHECK(fine.logits(ids).rows() == 7);
    CHECK(fine.logits(ids).cols() == 3);
    AssessmentModel again(spec, TaskKind::discriminator);
    again.init(1);
    CHECK(again.params() == disc.params());
  }
}

TEST_CASE("load_backbone copies backbone tensors and leaves the head") {
  BackboneSpec spec;
  spec.encoder = small_encoder();
  AssessmentModel src(spec, TaskKind::discriminator);
  AssessmentModel dst(spec, TaskKind::overall);
  src.init(1);
  dst.init(2);
  const ParamSet before = dst.params();
  dst.load_backbone(src.params());
  for (std::size_t i = 0; i < dst.params().count(); ++i) {
    const std::string& name = dst.params().name(i);
    if (name.rfind("enc.", 0) == 0)
      CHECK(dst.params()[i] == src.params()[src.params().index(name)]);
    else
      CHECK(dst.params()[i] == before[i]);
  }
  BackboneSpec other = spec;
  other.encoder.d_model = 8;
  other.encoder.n_heads = 2;
  AssessmentModel mismatch(other, TaskKind::overall);
  CHECK_THROWS_AS(mismatch.load_backbone(src.params()), InvalidInput);
}
