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
#include "pbrk/error.hpp"
#include "pbrk/gradcheck.hpp"
#include "pbrk/model.hpp"
#include "pbrk/rng.hpp"

using namespace pbrk;

namespace {

struct Fixture {
  AssessmentModel model;
  std::vector<std::int32_t> ids{2, 9, 4, 10, 6, 11, 5, 12};
  std::vector<std::uint8_t> mask{0, 0, 1, 0, 1, 0, 1, 0};
  std::vector<int> labels{0, 0, 2, 0, 1, 0, 0, 0};
  Target target;

  Fixture(BackboneKind kind, TaskKind task) : model(spec(kind), task) {
    model.init(1);
    Rng rng(5);
    for (std::size_t p = 0; p < model.params().count(); ++p)
      for (float& x : model.params()[p].data()) x = rng.normal(0.0f, 0.1f);
    target.label = 1;
    target.position_labels = labels;
    target.break_mask = mask;
  }

  static BackboneSpec spec(BackboneKind kind) {
    BackboneSpec s;
    s.kind = kind;
    s.encoder = {20, 16, 2, 2, 24, 8, 0.0f};
    s.bilstm = {20, 8, 8, 8};
    return s;
  }

  LossFunction loss() {
    return [this](const ParamSet& ps, Gradients* g) {
      return model.loss_at(ps, ids, target, g, nullptr);
    };
  }
};

}  // namespace

TEST_CASE("grad_check recovers an analytic polynomial gradient") {
  ParamSet p;
  p.add("x", {4});
  for (std::size_t i = 0; i < 4; ++i) p[0][i] = 0.3f * static_cast<float>(i) - 0.4f;
  const LossFunction f = [](const ParamSet& ps, Gradients* g) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double x = ps[0][i];
      s += x * x * x + 2.0 * x;
      if (g) (*g)[0][i] += static_cast<float>(3.0 * x * x + 2.0);
    }
    return s;
  };
  const ParamSet before = p;
  const GradCheckResult r = grad_check(f, p);
  CHECK(r.checked == 4);
  CHECK(r.max_rel_error < 1e-4);
  CHECK(p == before);
}

TEST_CASE("grad_check validates its options") {
  ParamSet p;
  p.add("x", {1});
  const LossFunction f = [](const ParamSet&, Gradients*) { return 0.0; };
  GradCheckOptions o;
  o.eps = 0.0;
  CHECK_THROWS_AS(grad_check(f, p, o), InvalidInput);
  o = {};
  o.points = 2;
  CHECK_THROWS_AS(grad_check(f, p, o), InvalidInput);
  o = {};
  o.floor = 0.0;
  CHECK_THROWS_AS(grad_check(f, p, o), InvalidInput);
}

TEST_CASE("analytic gradients match finite differences for every backbone and head") {
  for (BackboneKind kind : {BackboneKind::transformer, BackboneKind::bilstm}) {
    for (TaskKind task : {TaskKind::discriminator, TaskKind::overall, TaskKind::finegrained}) {
      CAPTURE(to_string(kind));
      CAPTURE(to_string(task));
      Fixture fx(kind, task);
      GradCheckOptions o;
      o.samples_per_tensor = 12;
      const GradCheckResult r = grad_check(fx.loss(), fx.model.params(), o);
      CAPTURE(r.worst_param);
      CHECK(r.max_rel_error < 1e-3);
    }
  }
}

TEST_CASE("grad_check flags a corrupted backward pass") {
  // The attention output bias feeds the residual stream directly; its
  // analytic gradient is dropped while the loss still depends on it.
  Fixture fx(BackboneKind::transformer, TaskKind::overall);
  const LossFunction honest = fx.loss();
  const std::size_t broken = fx.model.params().index("enc.layer0.attn.bo");
  const LossFunction mutated = [&](const ParamSet& ps, Gradients* g) {
    const double l = honest(ps, g);
    if (g) (*g)[broken].fill(0.0f);
    return l;
  };
  GradCheckOptions o;
  o.samples_per_tensor = 12;
  const GradCheckResult r = grad_check(mutated, fx.model.params(), o);
  CHECK(r.max_rel_error > 0.1);
  CHECK(r.worst_param == "enc.layer0.attn.bo");
}
