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

#include "pbrk/tasks.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "pbrk/adam.hpp"
#include "pbrk/error.hpp"
#include "pbrk/loss.hpp"
#include "pbrk/rng.hpp"

namespace pbrk {

Rank rank_from_index(int i) {
  if (i < 0 || i > 2) throw InvalidInput("rank index out of range");
  return static_cast<Rank>(i + 1);
}

Rank rank_from_int(int value) {
  if (value < 1 || value > 3)
    throw InvalidInput("rank must be 1, 2 or 3 (got " + std::to_string(value) + ")");
  return static_cast<Rank>(value);
}

std::string_view to_string(Rank r) {
  switch (r) {
    case Rank::poor: return "Poor";
    case Rank::fair: return "Fair";
    case Rank::great: return "Great";
  }
  return "?";
}

void validate(const RatedSample& sample) {
  check_encoded(sample.seq);
  if (sample.fine && sample.fine->size() != sample.seq.num_breaks())
    throw InvalidInput("sample '" + sample.seq.id + "': " +
                       std::to_string(sample.fine->size()) + " fine labels for " +
                       std::to_string(sample.seq.num_breaks()) + " break positions");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidInput("train: batch_size must be >= 1");
  if (epochs < 1) throw InvalidInput("train: epochs must be >= 1");
  if (!(lr > 0.0f)) throw InvalidInput("train: lr must be > 0");
  if (max_len < 2) throw InvalidInput("train: max_len must be >= 2");
}

ModelInit ModelInit::fresh(BackboneSpec backbone, Vocabulary vocab) {
  backbone.encoder.vocab_size = vocab.size();
  backbone.bilstm.vocab_size = vocab.size();
  return ModelInit{std::move(backbone), std::move(vocab), std::nullopt, "scratch"};
}

ModelInit ModelInit::from_checkpoint(const Checkpoint& ckpt) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(ckpt.vocab.fingerprint()));
  return ModelInit{ckpt.model.backbone_spec(), ckpt.vocab, ckpt.model.params(),
                   std::string(to_string(ckpt.model.task())) + ":" + buf};
}

namespace {

// Seed streams within one training run.
constexpr std::uint64_t kInitStream = 31;
constexpr std::uint64_t kOrderStream = 32;
constexpr std::uint64_t kDropoutStream = 33;
constexpr std::uint64_t kSplitStream = 34;

struct Example {
  const EncodedSequence* seq = nullptr;
  int label = -1;
  std::vector<int> position_labels;

  Target target() const {
    return Target{label, position_labels, seq->break_mask};
  }
};

void check_against_vocab(const EncodedSequence& seq, const Vocabulary& vocab) {
  check_encoded(seq);
  if (seq.vocab_fingerprint != vocab.fingerprint())
    throw InvalidInput("sample '" + seq.id +
                       "' was encoded with a different vocabulary");
  for (std::int32_t id : seq.ids)
    if (id < 0 || static_cast<std::size_t>(id) >= vocab.size())
      throw InvalidInput("sample '" + seq.id + "' has an id outside the vocabulary");
}

bool uses_dropout(const AssessmentModel& model) {
  return model.backbone_spec().kind == BackboneKind::transformer &&
         model.backbone_spec().encoder.dropout_prob > 0.0f;
}

std::vector<float> inverse_frequency(std::span<const Example> examples,
                                     std::size_t classes, bool per_position) {
  std::vector<double> counts(classes, 0.0);
  double total = 0.0;
  for (const auto& ex : examples) {
    if (!per_position) {
      counts[static_cast<std::size_t>(ex.label)] += 1.0;
      total += 1.0;
      continue;
    }
    for (std::size_t t = 0; t < ex.position_labels.size(); ++t)
      if (ex.seq->break_mask[t]) {
        counts[static_cast<std::size_t>(ex.position_labels[t])] += 1.0;
        total += 1.0;
      }
  }
  std::vector<float> w(classes, 1.0f);
  for (std::size_t c = 0; c < classes; ++c)
    if (counts[c] > 0.0)
      w[c] = static_cast<float>(total / (static_cast<double>(classes) * counts[c]));
  return w;
}

TrainProgress train_examples(AssessmentModel& model, std::span<const Example> examples,
                             const TrainConfig& cfg, std::span<const float> weights,
                             bool want_initial_loss, const EpochCallback& on_epoch) {
  TrainProgress progress;
  if (want_initial_loss) {
    double sum = 0.0;
    for (const auto& ex : examples)
      sum += model.loss(ex.seq->ids, ex.target(), nullptr, nullptr, weights);
    progress.initial_loss = static_cast<float>(sum / static_cast<double>(examples.size()));
  }

  Rng order(derive_seed(cfg.seed, kOrderStream));
  Rng dropout(derive_seed(cfg.seed, kDropoutStream));
  Rng* drop = uses_dropout(model) ? &dropout : nullptr;
  Adam adam(model.params(), AdamConfig{cfg.lr});
  Gradients grads = model.params().zeros_like();
  std::vector<std::size_t> idx(examples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order.shuffle(idx.begin(), idx.end());
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(idx.size(), start + cfg.batch_size);
      grads.fill(0.0f);
      for (std::size_t j = start; j < end; ++j) {
        const Example& ex = examples[idx[j]];
        const double l = model.loss(ex.seq->ids, ex.target(), &grads, drop, weights);
        if (!std::isfinite(l))
          throw NumericError("non-finite loss on sample '" + ex.seq->id + "'");
        epoch_sum += l;
      }
      grads.scale(1.0f / static_cast<float>(end - start));
      adam.step(model.params(), grads);
      ++progress.steps;
    }
    if (!model.params().all_finite())
      throw NumericError("non-finite parameter after epoch " + std::to_string(epoch));
    const float mean = static_cast<float>(epoch_sum / static_cast<double>(idx.size()));
    progress.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return progress;
}

BinaryReport binary_report(const AssessmentModel& model,
                           std::span<const LabeledSequence> data,
                           std::span<const std::size_t> which) {
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i : which) {
    const auto& s = data[i];
    Matrix logit = model.logits(s.seq.ids);
    // Ties go to "original".
    const bool predicted = logit(0, 1) > logit(0, 0);
    const bool actual = s.label == SequenceLabel::corrupted;
    if (predicted == actual) ++correct;
    if (predicted && actual) ++tp;
    if (predicted && !actual) ++fp;
    if (!predicted && actual) ++fn;
  }
  BinaryReport r;
  r.count = which.size();
  if (r.count == 0) return r;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.count);
  r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

Checkpoint finetune(std::span<const RatedSample> dataset, const ModelInit& init,
                    const TrainConfig& cfg, TaskKind task, TrainProgress* progress,
                    const EpochCallback& on_epoch) {
  cfg.validate();
  if (dataset.empty()) throw InvalidInput("fine-tuning: empty dataset");
  if (init.backbone.vocab_size() != init.vocab.size())
    throw InvalidInput("fine-tuning: backbone vocabulary size " +
                       std::to_string(init.backbone.vocab_size()) +
                       " does not match vocabulary of size " +
                       std::to_string(init.vocab.size()));

  std::vector<Example> examples;
  examples.reserve(dataset.size());
  for (const auto& s : dataset) {
    validate(s);
    check_against_vocab(s.seq, init.vocab);
    Example ex{&s.seq, -1, {}};
    if (task == TaskKind::overall) {
      if (!s.overall)
        throw InvalidInput("sample '" + s.seq.id + "' has no overall rank");
      ex.label = rank_index(*s.overall);
    } else {
      if (!s.fine) throw InvalidInput("sample '" + s.seq.id + "' has no fine ranks");
      ex.position_labels.assign(s.seq.ids.size(), -1);
      std::size_t k = 0;
      for (std::size_t t = 0; t < s.seq.ids.size(); ++t)
        if (s.seq.break_mask[t]) ex.position_labels[t] = rank_index((*s.fine)[k++]);
    }
    examples.push_back(std::move(ex));
  }

  AssessmentModel model(init.backbone, task);
  model.init(derive_seed(cfg.seed, kInitStream));
  if (init.pretrained) model.load_backbone(*init.pretrained);

  std::vector<float> weights;
  if (cfg.class_weights)
    weights = inverse_frequency(examples, 3, task == TaskKind::finegrained);
  TrainProgress p = train_examples(model, examples, cfg, weights,
                                   progress != nullptr, on_epoch);
  if (progress) *progress = std::move(p);
  return Checkpoint{std::move(model), init.vocab, cfg.seed, init.origin, cfg};
}

void check_prediction_input(const Checkpoint& ckpt, const EncodedSequence& sample,
                            TaskKind expected) {
  if (ckpt.model.task() != expected)
    throw InvalidInput("checkpoint is a '" + std::string(to_string(ckpt.model.task())) +
                       "' model, expected '" + std::string(to_string(expected)) + "'");
  check_against_vocab(sample, ckpt.vocab);
}

}  // namespace

PretrainResult pretrain_rbtd(std::span<const LabeledSequence> dataset,
                             const Vocabulary& vocab, const TrainConfig& cfg,
                             const EncoderConfig& encoder,
                             const EpochCallback& on_epoch) {
  cfg.validate();
  if (dataset.size() < 2) throw InvalidInput("pretraining: dataset too small");
  bool has_original = false, has_corrupted = false;
  for (const auto& s : dataset) {
    check_against_vocab(s.seq, vocab);
    (s.label == SequenceLabel::original ? has_original : has_corrupted) = true;
  }
  if (!has_original || !has_corrupted)
    throw InvalidInput("pretraining: dataset must contain both original and corrupted sequences");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split(derive_seed(cfg.seed, kSplitStream));
  split.shuffle(order.begin(), order.end());
  const std::size_t heldout_n = std::max<std::size_t>(1, dataset.size() * 5 / 100);
  std::vector<std::size_t> heldout(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(heldout_n));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(heldout_n), order.end());

  BackboneSpec spec;
  spec.kind = BackboneKind::transformer;
  spec.encoder = encoder;
  spec.encoder.vocab_size = vocab.size();
  spec.bilstm.vocab_size = vocab.size();
  AssessmentModel model(spec, TaskKind::discriminator);
  model.init(derive_seed(cfg.seed, kInitStream));

  std::vector<Example> examples;
  examples.reserve(train.size());
  for (std::size_t i : train)
    examples.push_back(Example{&dataset[i].seq,
                               dataset[i].label == SequenceLabel::corrupted ? 1 : 0,
                               {}});
  std::vector<float> weights;
  if (cfg.class_weights) weights = inverse_frequency(examples, 2, false);
  TrainProgress progress = train_examples(model, examples, cfg, weights, true, on_epoch);

  PretrainResult result{
      Checkpoint{std::move(model), vocab, cfg.seed, "scratch", cfg}, {}, {}, std::move(progress),
      train.size(), heldout.size()};
  result.heldout = binary_report(result.checkpoint.model, dataset, heldout);
  result.train = binary_report(result.checkpoint.model, dataset, train);
  return result;
}

Checkpoint finetune_overall(std::span<const RatedSample> dataset, const ModelInit& init,
                            const TrainConfig& cfg, TrainProgress* progress,
                            const EpochCallback& on_epoch) {
  return finetune(dataset, init, cfg, TaskKind::overall, progress, on_epoch);
}

Checkpoint finetune_finegrained(std::span<const RatedSample> dataset,
                                const ModelInit& init, const TrainConfig& cfg,
                                TrainProgress* progress, const EpochCallback& on_epoch) {
  return finetune(dataset, init, cfg, TaskKind::finegrained, progress, on_epoch);
}

OverallPrediction predict_overall(const Checkpoint& ckpt, const EncodedSequence& sample) {
  check_prediction_input(ckpt, sample, TaskKind::overall);
  Matrix logit = ckpt.model.logits(sample.ids);
  std::vector<float> p = softmax(std::span<const float>(logit.data(), 3));
  OverallPrediction out;
  int best = 0;
  for (int c = 1; c < 3; ++c)
    if (logit(0, c) > logit(0, best)) best = c;
  out.rank = rank_from_index(best);
  for (int c = 0; c < 3; ++c) out.probs[static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)];
  return out;
}

std::vector<Rank> predict_finegrained(const Checkpoint& ckpt,
                                      const EncodedSequence& sample) {
  check_prediction_input(ckpt, sample, TaskKind::finegrained);
  std::vector<Rank> out;
  if (sample.num_breaks() == 0) return out;
  Matrix logit = ckpt.model.logits(sample.ids);
  for (Eigen::Index t = 0; t < logit.rows(); ++t) {
    if (!sample.break_mask[static_cast<std::size_t>(t)]) continue;
    int best = 0;
    for (int c = 1; c < 3; ++c)
      if (logit(t, c) > logit(t, best)) best = c;
    out.push_back(rank_from_index(best));
  }
  return out;
}

float predict_corrupted(const Checkpoint& ckpt, const EncodedSequence& sample) {
  check_prediction_input(ckpt, sample, TaskKind::discriminator);
  Matrix logit = ckpt.model.logits(sample.ids);
  return softmax(std::span<const float>(logit.data(), 2))[1];
}

}  // namespace pbrk
