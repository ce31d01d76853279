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

#ifndef PBRK_METRICS_HPP_
#define PBRK_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pbrk {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 3);

  void add(std::size_t truth, std::size_t predicted, std::uint64_t n = 1);
  void merge(const ConfusionMatrix& other);

  std::size_t classes() const { return n_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const;
  std::uint64_t total() const;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t predicted) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct FoldMetrics {
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

// precision = TP / column sum, recall = TP / row sum, each 0 when the
// denominator is 0; F1 = 2PR / (P + R), 0 when P + R = 0. Classes with no
// support still count toward the macro mean. Throws InvalidInput when the
// matrix is empty.
FoldMetrics compute_metrics(const ConfusionMatrix& cm);

std::vector<ClassMetrics> per_category_report(const ConfusionMatrix& cm);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

MeanStd mean_std(std::span<const double> values);

// Cross-validation summary. `folds[i]` was computed from `confusion[i]`.
struct MetricsReport {
  std::vector<FoldMetrics> folds;
  std::vector<ConfusionMatrix> confusion;
  MeanStd accuracy, weighted_f1, macro_f1;
  std::vector<MeanStd> precision, recall;  // per class
  ConfusionMatrix pooled;                  // sum over folds

  // Aggregates `folds` into the mean/std fields.
  void summarize();
};

MetricsReport make_report(std::vector<ConfusionMatrix> per_fold);

}  // namespace pbrk

#endif  // PBRK_METRICS_HPP_
