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

#ifndef PBRK_RNG_HPP_
#define PBRK_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace pbrk {

// Explicitly seeded generator. Every random decision in the library goes
// through one of these; there is no global state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // [0, 1)
  double uniform();
  // [0, n); n must be > 0.
  std::size_t below(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }
  float normal(float mean, float stddev);
  // Normal resampled until within two standard deviations.
  float truncated_normal(float stddev);

  // Fisher-Yates driven by below(), stable across standard libraries.
  template <class It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream index (splitmix64 finalizer) so that
// sub-components get decorrelated, reproducible seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Offsets used to derive per-stage seeds from one global run seed.
namespace seed_stream {
inline constexpr std::uint64_t kSynth = 1;
inline constexpr std::uint64_t kCorruption = 2;
inline constexpr std::uint64_t kPretrain = 3;
inline constexpr std::uint64_t kFinetune = 4;
inline constexpr std::uint64_t kEval = 5;
}  // namespace seed_stream

}  // namespace pbrk

#endif  // PBRK_RNG_HPP_
