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

#ifndef PBRK_TASKS_HPP_
#define PBRK_TASKS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbrk/corruption.hpp"
#include "pbrk/model.hpp"
#include "pbrk/vocab.hpp"

namespace pbrk {

// Assessment scale. Poor < Fair < Great.
enum class Rank : std::uint8_t { poor = 1, fair = 2, great = 3 };

inline constexpr std::array<Rank, 3> kAllRanks = {Rank::poor, Rank::fair, Rank::great};
constexpr int rank_index(Rank r) { return static_cast<int>(r) - 1; }
Rank rank_from_index(int i);
Rank rank_from_int(int value);  // 1..3, throws otherwise
std::string_view to_string(Rank r);

struct RatedSample {
  EncodedSequence seq;
  std::optional<Rank> overall;
  std::optional<std::vector<Rank>> fine;  // one per break position

  bool operator==(const RatedSample&) const = default;
};

// Throws InvalidInput when the encoding is inconsistent or `fine` does not
// have one rank per break position.
void validate(const RatedSample& sample);

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 3;
  float lr = 1e-4f;
  std::uint64_t seed = 0;
  std::size_t max_len = kDefaultMaxLen;
  // Inverse-frequency loss weights computed from the training labels.
  bool class_weights = false;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// A trained model with everything needed to score new input.
struct Checkpoint {
  AssessmentModel model;
  Vocabulary vocab;
  std::uint64_t seed = 0;
  // "scratch", or "<source task>:<hex vocab fingerprint>" when initialized
  // from another checkpoint. Recorded, never interpreted.
  std::string origin = "scratch";
  TrainConfig train;
};

// Starting point for fine-tuning: a fresh backbone, or the backbone of an
// existing checkpoint (all weights remain trainable).
struct ModelInit {
  BackboneSpec backbone;
  Vocabulary vocab;
  std::optional<ParamSet> pretrained;
  std::string origin = "scratch";

  static ModelInit fresh(BackboneSpec backbone, Vocabulary vocab);
  static ModelInit from_checkpoint(const Checkpoint& ckpt);
};

struct TrainProgress {
  float initial_loss = 0.0f;         // mean over the training set before any step
  std::vector<float> epoch_losses;   // running mean over each epoch
  std::size_t steps = 0;
};

struct BinaryReport {
  double accuracy = 0.0;
  double precision = 0.0;  // of the corrupted class
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t count = 0;
};

struct PretrainResult {
  Checkpoint checkpoint;
  BinaryReport heldout;
  BinaryReport train;
  TrainProgress progress;
  std::size_t train_size = 0;
  std::size_t heldout_size = 0;
};

// Optional per-epoch hook; receives the 1-based epoch and its mean loss.
using EpochCallback = std::function<void(std::size_t epoch, float mean_loss)>;

// Replaced-break-token detection: binary discriminator on the CLS state.
// A seeded 95/5 split is held out for the reported metrics. Throws
// InvalidInput when only one label is present or encodings do not match
// `vocab`; NumericError on a non-finite loss.
PretrainResult pretrain_rbtd(std::span<const LabeledSequence> dataset,
                             const Vocabulary& vocab, const TrainConfig& cfg,
                             const EncoderConfig& encoder,
                             const EpochCallback& on_epoch = {});

// Sequence classification into Poor/Fair/Great.
Checkpoint finetune_overall(std::span<const RatedSample> dataset,
                            const ModelInit& init, const TrainConfig& cfg,
                            TrainProgress* progress = nullptr,
                            const EpochCallback& on_epoch = {});

// Token classification at break positions; the loss only covers breaks.
Checkpoint finetune_finegrained(std::span<const RatedSample> dataset,
                                const ModelInit& init, const TrainConfig& cfg,
                                TrainProgress* progress = nullptr,
                                const EpochCallback& on_epoch = {});

struct OverallPrediction {
  Rank rank = Rank::great;
  std::array<float, 3> probs{};  // Poor, Fair, Great
};

// Argmax of the softmax; exact ties go to the lower rank. Throws
// InvalidInput when the sample was encoded with a different vocabulary or
// the checkpoint is not an overall model.
OverallPrediction predict_overall(const Checkpoint& ckpt, const EncodedSequence& sample);

// One rank per break position, in order.
std::vector<Rank> predict_finegrained(const Checkpoint& ckpt,
                                      const EncodedSequence& sample);

// Probability that the sample was corrupted.
float predict_corrupted(const Checkpoint& ckpt, const EncodedSequence& sample);

}  // namespace pbrk

#endif  // PBRK_TASKS_HPP_
