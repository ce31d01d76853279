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

#include <benchmark/benchmark.h>

#include <vector>

#include "pbrk/metrics.hpp"
#include "pbrk/model.hpp"
#include "pbrk/rng.hpp"
#include "pbrk/tokens.hpp"
#include "pbrk/vocab.hpp"

using namespace pbrk;

namespace {

std::vector<std::int32_t> sample_ids(std::size_t len, std::size_t vocab) {
  Rng rng(1);
  std::vector<std::int32_t> ids{Vocabulary::kCls};
  for (std::size_t i = 1; i < len; ++i)
    ids.push_back(i % 2 == 0 ? 4 + static_cast<std::int32_t>(rng.below(4))
                             : 8 + static_cast<std::int32_t>(rng.below(vocab - 8)));
  return ids;
}

void BM_Quantize(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> gaps(4096);
  for (double& g : gaps) g = rng.uniform() * 0.4;
  for (auto _ : state)
    for (double g : gaps) benchmark::DoNotOptimize(quantize(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gaps.size()));
}
BENCHMARK(BM_Quantize);

void BM_Forward(benchmark::State& state, BackboneKind kind) {
  BackboneSpec spec;
  spec.kind = kind;
  spec.encoder.vocab_size = 200;
  spec.bilstm.vocab_size = 200;
  AssessmentModel model(spec, TaskKind::finegrained);
  model.init(3);
  const auto ids = sample_ids(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) benchmark::DoNotOptimize(model.logits(ids));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Forward, transformer, BackboneKind::transformer)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Forward, bilstm, BackboneKind::bilstm)->Arg(32)->Arg(128);

void BM_TrainStep(benchmark::State& state) {
  BackboneSpec spec;
  spec.encoder.vocab_size = 200;
  AssessmentModel model(spec, TaskKind::finegrained);
  model.init(4);
  const auto ids = sample_ids(64, 200);
  std::vector<int> labels(ids.size(), 2);
  std::vector<std::uint8_t> mask(ids.size(), 0);
  for (std::size_t i = 2; i < ids.size(); i += 2) mask[i] = 1;
  Target t;
  t.position_labels = labels;
  t.break_mask = mask;
  Gradients g = model.params();
  for (auto _ : state) {
    for (std::size_t p = 0; p < g.count(); ++p) g[p].fill(0.0f);
    benchmark::DoNotOptimize(model.loss(ids, t, &g, nullptr));
  }
}
BENCHMARK(BM_TrainStep);

void BM_Metrics(benchmark::State& state) {
  Rng rng(5);
  ConfusionMatrix cm(3);
  for (int i = 0; i < 10000; ++i) cm.add(rng.below(3), rng.below(3));
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(cm));
}
BENCHMARK(BM_Metrics);

}  // namespace
BENCHMARK_MAIN();
