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

#include "pbrk/crossval.hpp"

#include <algorithm>
#include <map>

#include "pbrk/error.hpp"
#include "pbrk/rng.hpp"

namespace pbrk {

std::vector<std::vector<std::size_t>> kfold_split(std::span<const int> strata,
                                                  std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("k-fold: k must be >= 2");
  if (k > strata.size())
    throw InvalidInput("k-fold: k = " + std::to_string(k) + " exceeds dataset size " +
                       std::to_string(strata.size()));
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t deal = 0;
  for (auto& [label, items] : groups) {
    rng.shuffle(items.begin(), items.end());
    for (std::size_t i : items) folds[deal++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

MetricsReport cross_validate(std::span<const int> strata, std::size_t k,
                             std::uint64_t seed, const FoldTrainer& trainer) {
  const auto folds = kfold_split(strata, k, seed);
  std::vector<ConfusionMatrix> results;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    std::sort(train.begin(), train.end());
    const std::string where = "fold " + std::to_string(f) + ": ";
    try {
      results.push_back(trainer(train, folds[f], f));
    } catch (const NumericError& e) {
      throw NumericError(where + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput(where + e.what());
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  return make_report(std::move(results));
}

}  // namespace pbrk
