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

#ifndef PBRK_CLI_REPORT_HPP_
#define PBRK_CLI_REPORT_HPP_

#include <string>

#include "pbrk/metrics.hpp"
#include "pbrk/tasks.hpp"

namespace pbrk::cli {

struct ReportHeader {
  std::string task;      // "overall" or "fine"
  std::string assessor;  // transformer, bilstm, against-ref
  std::string origin;    // scratch or the initial checkpoint's origin tag
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

// Percentages as "avg.(std)", then precision/recall per category, then the
// pooled confusion matrix.
std::string format_report(const ReportHeader& h, const MetricsReport& r);

// Same content as JSON, fractions rather than percentages.
std::string report_json(const ReportHeader& h, const MetricsReport& r);

std::string format_binary(const BinaryReport& r);

}  // namespace pbrk::cli

#endif  // PBRK_CLI_REPORT_HPP_
