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

#ifndef PBRK_CHECKPOINT_HPP_
#define PBRK_CHECKPOINT_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include "pbrk/tasks.hpp"

namespace pbrk {

// On-disk layout, all integers little-endian:
//
//   "PBRK1\n"
//   u64 metadata length, metadata JSON (UTF-8)
//   u64 float count, float32 parameters in the order listed in metadata
//
// Metadata records the format version, backbone kind and configs, task,
// training config, seed, origin, vocabulary and the parameter names and
// shapes. Saving a loaded checkpoint reproduces the input bytes.
inline constexpr std::string_view kCheckpointMagic = "PBRK1\n";
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ckpt, std::ostream& out);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

// Throws ParseError on a bad magic, version, truncated data or when the
// stored parameter layout does not match the one implied by the stored
// configs; InvalidInput when `expected` is given and differs.
Checkpoint load_checkpoint(std::istream& in, const std::string& source = "<checkpoint>",
                           std::optional<TaskKind> expected = std::nullopt);
Checkpoint load_checkpoint(const std::string& path,
                           std::optional<TaskKind> expected = std::nullopt);

}  // namespace pbrk

#endif  // PBRK_CHECKPOINT_HPP_
