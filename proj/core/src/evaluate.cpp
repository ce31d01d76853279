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

#include "pbrk/evaluate.hpp"

#include <algorithm>
#include <string>

#include "pbrk/error.hpp"
#include "pbrk/rng.hpp"

namespace pbrk {

std::vector<RatedSample> rated_samples(std::span<const EslSample> data,
                                       const Vocabulary& vocab, std::size_t max_len) {
  std::vector<RatedSample> out;
  out.reserve(data.size());
  for (const auto& s : data) {
    RatedSample r;
    r.seq = encode(s.tokens, vocab, max_len);
    r.overall = s.truth.overall;
    std::vector<Rank> fine(s.truth.fine.begin(),
                           s.truth.fine.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                      s.truth.fine.size(), r.seq.num_breaks())));
    r.fine = std::move(fine);
    out.push_back(std::move(r));
  }
  return out;
}

ReferenceSet reference_set(std::span<const EslSample> data) {
  ReferenceSet refs;
  for (const auto& s : data) refs.add(s.reference);
  return refs;
}

std::string_view to_string(Assessor a) {
  switch (a) {
    case Assessor::transformer: return "transformer";
    case Assessor::bilstm: return "bilstm";
    case Assessor::against_reference: return "against-ref";
  }
  return "?";
}

Assessor parse_assessor(std::string_view s) {
  for (Assessor a : {Assessor::transformer, Assessor::bilstm, Assessor::against_reference})
    if (to_string(a) == s) return a;
  throw InvalidInput("unknown assessor '" + std::string(s) +
                     "' (expected transformer, bilstm or against-ref)");
}

namespace {

int stratum_of(const RatedSample& s) {
  if (s.overall) return rank_index(*s.overall);
  if (s.fine) return rank_index(aggregate_overall(*s.fine));
  throw InvalidInput("sample '" + s.seq.id + "' has no ranks");
}

void check_labels(std::span<const RatedSample> data, TaskKind task) {
  for (const auto& s : data) {
    validate(s);
    if (task == TaskKind::overall && !s.overall)
      throw InvalidInput("sample '" + s.seq.id + "' has no overall rank");
    if (task == TaskKind::finegrained && !s.fine)
      throw InvalidInput("sample '" + s.seq.id + "' has no fine ranks");
  }
}

void add_prediction(ConfusionMatrix& cm, const RatedSample& s, TaskKind task,
                    Rank overall, std::span<const Rank> fine) {
  if (task == TaskKind::overall) {
    cm.add(rank_index(*s.overall), rank_index(overall));
    return;
  }
  const auto& truth = *s.fine;
  if (fine.size() != truth.size())
    throw InvalidInput("sample '" + s.seq.id + "': prediction covers " +
                       std::to_string(fine.size()) + " breaks, labels cover " +
                       std::to_string(truth.size()));
  for (std::size_t i = 0; i < truth.size(); ++i)
    cm.add(rank_index(truth[i]), rank_index(fine[i]));
}

ConfusionMatrix against_reference_fold(std::span<const RatedSample> data,
                                       std::span<const std::size_t> test,
                                       const Vocabulary& vocab, const EvalSpec& spec) {
  ConfusionMatrix cm(3);
  for (std::size_t i : test) {
    const RatedSample& s = data[i];
    const TokenSequence seq = decode(s.seq, vocab);
    const auto refs = spec.references->find(s.seq.id);
    if (refs.empty()) throw InvalidInput("no reference for sample '" + s.seq.id + "'");
    // The reference that matches best decides both tasks.
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t r = 0; r < refs.size(); ++r) {
      const double score = break_similarity(seq, refs[r]);
      if (score > best_score) {
        best_score = score;
        best = r;
      }
    }
    const std::vector<Rank> fine = fine_rank_against_reference(seq, refs[best]);
    add_prediction(cm, s, spec.task, rank_from_similarity(best_score), fine);
  }
  return cm;
}

ConfusionMatrix trained_fold(std::span<const RatedSample> data,
                             std::span<const std::size_t> train,
                             std::span<const std::size_t> test, std::size_t fold,
                             const Vocabulary& vocab, const EvalSpec& spec) {
  std::vector<RatedSample> train_set;
  train_set.reserve(train.size());
  for (std::size_t i : train) train_set.push_back(data[i]);

  ModelInit init = spec.init ? ModelInit::from_checkpoint(*spec.init)
                             : ModelInit::fresh(spec.backbone, vocab);
  TrainConfig cfg = spec.train;
  cfg.seed = derive_seed(spec.train.seed, fold);
  const Checkpoint model = spec.task == TaskKind::overall
                               ? finetune_overall(train_set, init, cfg)
                               : finetune_finegrained(train_set, init, cfg);
  ConfusionMatrix cm(3);
  for (std::size_t i : test) {
    const RatedSample& s = data[i];
    if (spec.task == TaskKind::overall)
      add_prediction(cm, s, spec.task, predict_overall(model, s.seq).rank, {});
    else
      add_prediction(cm, s, spec.task, Rank::great, predict_finegrained(model, s.seq));
  }
  return cm;
}

}  // namespace

MetricsReport evaluate(std::span<const RatedSample> data, const Vocabulary& vocab,
                       const EvalSpec& spec, const FoldCallback& on_fold) {
  if (spec.task == TaskKind::discriminator)
    throw InvalidInput("evaluate: task must be overall or finegrained");
  check_labels(data, spec.task);
  switch (spec.assessor) {
    case Assessor::against_reference:
      if (!spec.references) throw InvalidInput("evaluate: against-ref needs references");
      break;
    case Assessor::transformer:
      if (spec.init) {
        if (spec.init->model.backbone_spec().kind != BackboneKind::transformer)
          throw InvalidInput("evaluate: initial checkpoint is not a transformer");
        if (spec.init->vocab.fingerprint() != vocab.fingerprint())
          throw InvalidInput("evaluate: initial checkpoint uses a different vocabulary");
      } else if (spec.backbone.kind != BackboneKind::transformer) {
        throw InvalidInput("evaluate: backbone spec is not a transformer");
      }
      break;
    case Assessor::bilstm:
      if (spec.init) throw InvalidInput("evaluate: bilstm starts from scratch");
      if (spec.backbone.kind != BackboneKind::bilstm)
        throw InvalidInput("evaluate: backbone spec is not a bilstm");
      break;
  }

  std::vector<int> strata;
  strata.reserve(data.size());
  for (const auto& s : data) strata.push_back(stratum_of(s));

  return cross_validate(
      strata, spec.k, spec.seed,
      [&](std::span<const std::size_t> train, std::span<const std::size_t> test,
          std::size_t fold) {
        ConfusionMatrix cm = spec.assessor == Assessor::against_reference
                                 ? against_reference_fold(data, test, vocab, spec)
                                 : trained_fold(data, train, test, fold, vocab, spec);
        if (on_fold) on_fold(fold, cm);
        return cm;
      });
}

}  // namespace pbrk
