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

#include "pbrk/metrics.hpp"

#include <cmath>
#include <numeric>

#include "pbrk/error.hpp"

namespace pbrk {

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : n_(classes), counts_(classes * classes, 0) {
  if (classes == 0) throw InvalidInput("confusion matrix needs at least one class");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t n) {
  if (truth >= n_ || predicted >= n_)
    throw InvalidInput("confusion matrix: class index out of range");
  counts_[truth * n_ + predicted] += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw InvalidInput("confusion matrix: class count differs");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  return counts_.at(truth * n_ + predicted);
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(truth, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) s += at(t, predicted);
  return s;
}

std::vector<ClassMetrics> per_category_report(const ConfusionMatrix& cm) {
  std::vector<ClassMetrics> out(cm.classes());
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const double tp = static_cast<double>(cm.at(c, c));
    const double col = static_cast<double>(cm.col_sum(c));
    const double row = static_cast<double>(cm.row_sum(c));
    ClassMetrics& m = out[c];
    m.support = cm.row_sum(c);
    m.precision = col > 0 ? tp / col : 0.0;
    m.recall = row > 0 ? tp / row : 0.0;
    m.f1 = m.precision + m.recall > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
  }
  return out;
}

FoldMetrics compute_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw InvalidInput("metrics: empty confusion matrix");
  FoldMetrics m;
  m.per_class = per_category_report(cm);
  std::uint64_t trace = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) trace += cm.at(c, c);
  m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  for (const auto& c : m.per_class) {
    m.macro_f1 += c.f1;
    m.weighted_f1 += c.f1 * static_cast<double>(c.support);
  }
  m.macro_f1 /= static_cast<double>(cm.classes());
  m.weighted_f1 /= static_cast<double>(total);
  return m;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / n);
  return r;
}

void MetricsReport::summarize() {
  auto collect = [&](auto get) {
    std::vector<double> v;
    v.reserve(folds.size());
    for (const auto& f : folds) v.push_back(get(f));
    return mean_std(v);
  };
  accuracy = collect([](const FoldMetrics& f) { return f.accuracy; });
  weighted_f1 = collect([](const FoldMetrics& f) { return f.weighted_f1; });
  macro_f1 = collect([](const FoldMetrics& f) { return f.macro_f1; });
  const std::size_t classes = folds.empty() ? 0 : folds.front().per_class.size();
  precision.assign(classes, {});
  recall.assign(classes, {});
  for (std::size_t c = 0; c < classes; ++c) {
    precision[c] = collect([c](const FoldMetrics& f) { return f.per_class[c].precision; });
    recall[c] = collect([c](const FoldMetrics& f) { return f.per_class[c].recall; });
  }
}

MetricsReport make_report(std::vector<ConfusionMatrix> per_fold) {
  if (per_fold.empty()) throw InvalidInput("metrics report: no folds");
  MetricsReport r;
  r.pooled = ConfusionMatrix(per_fold.front().classes());
  for (const auto& cm : per_fold) {
    r.folds.push_back(compute_metrics(cm));
    r.pooled.merge(cm);
  }
  r.confusion = std::move(per_fold);
  r.summarize();
  return r;
}

}  // namespace pbrk
