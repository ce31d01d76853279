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

#include "pbrk/model.hpp"

#include "pbrk/error.hpp"
#include "pbrk/layers.hpp"
#include "pbrk/loss.hpp"

namespace pbrk {

std::string_view to_string(BackboneKind k) {
  return k == BackboneKind::transformer ? "transformer" : "bilstm";
}

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::discriminator: return "discriminator";
    case TaskKind::overall: return "overall";
    case TaskKind::finegrained: return "fine";
  }
  return "?";
}

BackboneKind parse_backbone_kind(std::string_view s) {
  if (s == "transformer") return BackboneKind::transformer;
  if (s == "bilstm") return BackboneKind::bilstm;
  throw InvalidInput("unknown backbone kind '" + std::string(s) + "'");
}

TaskKind parse_task_kind(std::string_view s) {
  if (s == "discriminator") return TaskKind::discriminator;
  if (s == "overall") return TaskKind::overall;
  if (s == "fine" || s == "finegrained") return TaskKind::finegrained;
  throw InvalidInput("unknown task '" + std::string(s) + "'");
}

std::size_t num_classes(TaskKind task) {
  return task == TaskKind::discriminator ? 2 : 3;
}

std::size_t BackboneSpec::vocab_size() const {
  return kind == BackboneKind::transformer ? encoder.vocab_size : bilstm.vocab_size;
}

AssessmentModel::Backbone AssessmentModel::make_backbone(const BackboneSpec& spec,
                                                         ParamSet& params) {
  if (spec.kind == BackboneKind::transformer)
    return TransformerEncoder(spec.encoder, params, "enc");
  return BiLstmEncoder(spec.bilstm, params, "lstm");
}

AssessmentModel::AssessmentModel(const BackboneSpec& spec, TaskKind task)
    : spec_(spec), task_(task), backbone_(make_backbone(spec_, params_)) {
  const std::string head = task == TaskKind::discriminator ? "rbtd_head"
                           : task == TaskKind::overall     ? "overall_head"
                                                           : "fine_head";
  head_w_ = params_.add(head + ".w", {hidden_size(), classes()});
  head_b_ = params_.add(head + ".b", {classes()});
}

std::size_t AssessmentModel::hidden_size() const {
  return std::visit([](const auto& b) { return b.hidden_size(); }, backbone_);
}

std::string_view AssessmentModel::backbone_prefix() const {
  return spec_.kind == BackboneKind::transformer ? "enc." : "lstm.";
}

void AssessmentModel::init(std::uint64_t seed) {
  Rng rng(seed);
  std::visit([&](const auto& b) { b.init(params_, rng); }, backbone_);
  for (float& x : params_[head_w_].data()) x = rng.truncated_normal(0.02f);
  params_[head_b_].fill(0.0f);
}

void AssessmentModel::load_backbone(const ParamSet& source) {
  const std::string_view prefix = backbone_prefix();
  for (std::size_t i = 0; i < params_.count(); ++i) {
    const std::string& name = params_.name(i);
    if (!name.starts_with(prefix)) continue;
    if (!source.contains(name))
      throw InvalidInput("pretrained parameters lack '" + name + "'");
    const Tensor& src = source[source.index(name)];
    if (src.shape() != params_[i].shape())
      throw InvalidInput("pretrained parameter '" + name + "' has a different shape");
    params_[i] = src;
  }
}

Matrix AssessmentModel::run_backbone(const ParamSet& params,
                                     std::span<const std::int32_t> ids,
                                     Rng* dropout, BackboneCache* cache) const {
  if (const auto* enc = std::get_if<TransformerEncoder>(&backbone_)) {
    TransformerEncoder::Cache* c = nullptr;
    if (cache) c = &cache->emplace<TransformerEncoder::Cache>();
    return enc->forward(params, ids, {}, dropout, c);
  }
  const auto& lstm = std::get<BiLstmEncoder>(backbone_);
  BiLstmEncoder::Cache* c = nullptr;
  if (cache) c = &cache->emplace<BiLstmEncoder::Cache>();
  return lstm.forward(params, ids, c);
}

void AssessmentModel::backbone_backward(const ParamSet& params,
                                        const BackboneCache& cache,
                                        const Matrix& d_hidden,
                                        Gradients& grads) const {
  if (const auto* enc = std::get_if<TransformerEncoder>(&backbone_)) {
    enc->backward(params, std::get<TransformerEncoder::Cache>(cache), d_hidden, grads);
    return;
  }
  std::get<BiLstmEncoder>(backbone_).backward(
      params, std::get<BiLstmEncoder::Cache>(cache), d_hidden, grads);
}

// Transformer: the CLS row. Bi-LSTM: last forward state and first
// backward state, each of which has read the whole sequence.
RowVector AssessmentModel::pool(const Matrix& hidden) const {
  if (spec_.kind == BackboneKind::transformer) return hidden.row(0);
  const Eigen::Index h = hidden.cols() / 2;
  RowVector out(hidden.cols());
  out.head(h) = hidden.row(hidden.rows() - 1).head(h);
  out.tail(h) = hidden.row(0).tail(h);
  return out;
}

void AssessmentModel::pool_backward(const RowVector& d_pooled,
                                    Matrix& d_hidden) const {
  if (spec_.kind == BackboneKind::transformer) {
    d_hidden.row(0) += d_pooled;
    return;
  }
  const Eigen::Index h = d_hidden.cols() / 2;
  d_hidden.row(d_hidden.rows() - 1).head(h) += d_pooled.head(h);
  d_hidden.row(0).tail(h) += d_pooled.tail(h);
}

Matrix AssessmentModel::logits(std::span<const std::int32_t> ids,
                               Rng* dropout) const {
  Matrix hidden = run_backbone(params_, ids, dropout, nullptr);
  if (task_ == TaskKind::finegrained)
    return layers::linear(hidden, params_[head_w_], params_[head_b_]);
  Matrix pooled = pool(hidden);
  return layers::linear(pooled, params_[head_w_], params_[head_b_]);
}

double AssessmentModel::loss(std::span<const std::int32_t> ids,
                            const Target& target, Gradients* grads,
                            Rng* dropout,
                            std::span<const float> class_weights) const {
  return loss_at(params_, ids, target, grads, dropout, class_weights);
}

double AssessmentModel::loss_at(const ParamSet& params,
                               std::span<const std::int32_t> ids,
                               const Target& target, Gradients* grads,
                               Rng* dropout,
                               std::span<const float> class_weights) const {
  const std::size_t c = classes();
  if (!class_weights.empty() && class_weights.size() != c)
    throw InvalidInput("class weight count must equal class count");
  auto weight = [&](std::size_t cls) {
    return class_weights.empty() ? 1.0f : class_weights[cls];
  };

  BackboneCache cache;
  Matrix hidden = run_backbone(params, ids, dropout, grads ? &cache : nullptr);
  const Tensor& w = params[head_w_];
  const Tensor& b = params[head_b_];

  if (task_ != TaskKind::finegrained) {
    if (target.label < 0 || static_cast<std::size_t>(target.label) >= c)
      throw InvalidInput("sequence label out of range");
    Matrix pooled = pool(hidden);
    Matrix logit = layers::linear(pooled, w, b);
    const auto cls = static_cast<std::size_t>(target.label);
    LossResult r = softmax_cross_entropy(
        std::span<const float>(logit.data(), c), cls, weight(cls));
    if (grads) {
      Matrix dlogit = Eigen::Map<const Matrix>(r.grad.data(), 1,
                                               static_cast<Eigen::Index>(c));
      Matrix dpooled = layers::linear_backward(dlogit, pooled, w,
                                               (*grads)[head_w_], (*grads)[head_b_]);
      Matrix dhidden = Matrix::Zero(hidden.rows(), hidden.cols());
      pool_backward(dpooled, dhidden);
      backbone_backward(params, cache, dhidden, *grads);
    }
    return r.loss;
  }

  const std::size_t L = ids.size();
  if (target.break_mask.size() != L || target.position_labels.size() != L)
    throw InvalidInput("position labels and break mask must match input length");
  Matrix logit = layers::linear(hidden, w, b);
  Matrix dlogit = Matrix::Zero(logit.rows(), logit.cols());
  double total = 0.0;
  for (std::size_t t = 0; t < L; ++t) {
    if (!target.break_mask[t]) continue;
    const int label = target.position_labels[t];
    if (label < 0 || static_cast<std::size_t>(label) >= c)
      throw InvalidInput("position label out of range at break position " +
                         std::to_string(t));
    const auto cls = static_cast<std::size_t>(label);
    LossResult r = softmax_cross_entropy(
        std::span<const float>(logit.row(static_cast<Eigen::Index>(t)).data(), c),
        cls, weight(cls));
    total += r.loss;
    for (std::size_t k = 0; k < c; ++k)
      dlogit(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = r.grad[k];
  }
  if (grads) {
    Matrix dhidden = layers::linear_backward(dlogit, hidden, w, (*grads)[head_w_],
                                             (*grads)[head_b_]);
    backbone_backward(params, cache, dhidden, *grads);
  }
  return total;
}

}  // namespace pbrk
