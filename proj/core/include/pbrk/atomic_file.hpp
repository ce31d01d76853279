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

#ifndef PBRK_ATOMIC_FILE_HPP_
#define PBRK_ATOMIC_FILE_HPP_

#include <functional>
#include <iosfwd>
#include <string>

namespace pbrk {

// Writes through `fill` into "<path>.tmp.<pid>" and renames it over `path`,
// so readers never observe a partial file. The temporary is removed if
// `fill` throws. Throws InvalidInput when the file cannot be written.
void write_file_atomically(const std::string& path,
                           const std::function<void(std::ostream&)>& fill);

}  // namespace pbrk

#endif  // PBRK_ATOMIC_FILE_HPP_
