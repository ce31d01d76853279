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

#ifndef PBRK_MODEL_HPP_
#define PBRK_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbrk/bilstm.hpp"
#include "pbrk/tensor.hpp"
#include "pbrk/transformer.hpp"

namespace pbrk {

enum class BackboneKind : std::uint8_t { transformer, bilstm };
// discriminator: 2-way sequence head (original / corrupted)
// overall:       3-way sequence head (Poor / Fair / Great)
// finegrained:   3-way head at every break position
enum class TaskKind : std::uint8_t { discriminator, overall, finegrained };

std::string_view to_string(BackboneKind k);
std::string_view to_string(TaskKind k);
BackboneKind parse_backbone_kind(std::string_view s);
TaskKind parse_task_kind(std::string_view s);
std::size_t num_classes(TaskKind task);

struct BackboneSpec {
  BackboneKind kind = BackboneKind::transformer;
  EncoderConfig encoder;
  BiLstmConfig bilstm;

  std::size_t vocab_size() const;
  bool operator==(const BackboneSpec&) const = default;
};

// What a sample is trained against.
//   sequence tasks: `label` is the class index.
//   finegrained:    `position_labels[i]` is the class index at position i;
//                   only positions with break_mask[i] == 1 contribute.
struct Target {
  int label = -1;
  std::span<const int> position_labels;
  std::span<const std::uint8_t> break_mask;
};

// Backbone plus a linear head. Owns its parameters.
class AssessmentModel {
 public:
  AssessmentModel(const BackboneSpec& spec, TaskKind task);

  // Seeded initialization of every parameter.
  void init(std::uint64_t seed);

  const BackboneSpec& backbone_spec() const { return spec_; }
  TaskKind task() const { return task_; }
  std::size_t classes() const { return num_classes(task_); }
  std::size_t hidden_size() const;
  std::string_view backbone_prefix() const;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  // Copies every backbone tensor from `source` by name. Head tensors are
  // left alone. Throws InvalidInput on a missing name or shape mismatch.
  void load_backbone(const ParamSet& source);

  // Sequence tasks: 1 x C. finegrained: L x C.
  Matrix logits(std::span<const std::int32_t> ids, Rng* dropout = nullptr) const;

  // Loss for one sample using the model's own parameters; accumulates
  // gradients into `grads` when non-null. `class_weights` may be empty.
  double loss(std::span<const std::int32_t> ids, const Target& target,
             Gradients* grads, Rng* dropout,
             std::span<const float> class_weights = {}) const;

  // Same, evaluated at an arbitrary parameter set of the same layout. Used
  // by finite-difference checks.
  double loss_at(const ParamSet& params, std::span<const std::int32_t> ids,
                const Target& target, Gradients* grads, Rng* dropout,
                std::span<const float> class_weights = {}) const;

 private:
  using Backbone = std::variant<TransformerEncoder, BiLstmEncoder>;
  using BackboneCache = std::variant<TransformerEncoder::Cache, BiLstmEncoder::Cache>;

  static Backbone make_backbone(const BackboneSpec& spec, ParamSet& params);
  Matrix run_backbone(const ParamSet& params, std::span<const std::int32_t> ids,
                      Rng* dropout, BackboneCache* cache) const;
  void backbone_backward(const ParamSet& params, const BackboneCache& cache,
                         const Matrix& d_hidden, Gradients& grads) const;
  RowVector pool(const Matrix& hidden) const;
  void pool_backward(const RowVector& d_pooled, Matrix& d_hidden) const;

  BackboneSpec spec_;
  TaskKind task_;
  ParamSet params_;
  Backbone backbone_;
  std::size_t head_w_ = 0, head_b_ = 0;
};

}  // namespace pbrk

#endif  // PBRK_MODEL_HPP_
