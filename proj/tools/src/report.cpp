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

#include "pbrk_cli/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace pbrk::cli {
namespace {

constexpr const char* kNames[] = {"Poor", "Fair", "Great"};

std::string pct(const MeanStd& m) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.1f(%.2f)", 100.0 * m.mean, 100.0 * m.std);
  return buf;
}

nlohmann::ordered_json ms(const MeanStd& m) {
  return {{"mean", m.mean}, {"std", m.std}};
}

}  // namespace

std::string format_report(const ReportHeader& h, const MetricsReport& r) {
  std::string s;
  char buf[160];
  std::snprintf(buf, sizeof buf, "task %s | model %s | init %s | %zu-fold | seed %llu | %zu samples\n",
                h.task.c_str(), h.assessor.c_str(), h.origin.c_str(), h.k,
                static_cast<unsigned long long>(h.seed), h.samples);
  s += buf;
  std::snprintf(buf, sizeof buf, "%-14s %-20s %-18s\n", "Acc.", "F-Score(weighted)",
                "F-Score(macro)");
  s += buf;
  std::snprintf(buf, sizeof buf, "%-14s %-20s %-18s\n", pct(r.accuracy).c_str(),
                pct(r.weighted_f1).c_str(), pct(r.macro_f1).c_str());
  s += buf;
  s += "\n";
  std::snprintf(buf, sizeof buf, "%-9s %-14s %-14s\n", "Category", "Precision", "Recall");
  s += buf;
  for (std::size_t c = 0; c < r.precision.size() && c < 3; ++c) {
    std::snprintf(buf, sizeof buf, "%-9s %-14s %-14s\n", kNames[c], pct(r.precision[c]).c_str(),
                  pct(r.recall[c]).c_str());
    s += buf;
  }
  s += "\nconfusion (rows truth, columns predicted, summed over folds)\n";
  std::snprintf(buf, sizeof buf, "%-9s %8s %8s %8s\n", "", kNames[0], kNames[1], kNames[2]);
  s += buf;
  for (std::size_t t = 0; t < 3; ++t) {
    std::snprintf(buf, sizeof buf, "%-9s %8llu %8llu %8llu\n", kNames[t],
                  static_cast<unsigned long long>(r.pooled.at(t, 0)),
                  static_cast<unsigned long long>(r.pooled.at(t, 1)),
                  static_cast<unsigned long long>(r.pooled.at(t, 2)));
    s += buf;
  }
  return s;
}

std::string report_json(const ReportHeader& h, const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["format"] = "pbrk-report";
  j["version"] = 1;
  j["task"] = h.task;
  j["model"] = h.assessor;
  j["init"] = h.origin;
  j["k"] = h.k;
  j["seed"] = h.seed;
  j["samples"] = h.samples;
  j["accuracy"] = ms(r.accuracy);
  j["weighted_f1"] = ms(r.weighted_f1);
  j["macro_f1"] = ms(r.macro_f1);
  auto per_class = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < r.precision.size() && c < 3; ++c)
    per_class.push_back({{"category", kNames[c]},
                         {"precision", ms(r.precision[c])},
                         {"recall", ms(r.recall[c])}});
  j["per_class"] = per_class;
  auto folds = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < r.folds.size(); ++f) {
    auto cm = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < 3; ++t)
      cm.push_back({r.confusion[f].at(t, 0), r.confusion[f].at(t, 1), r.confusion[f].at(t, 2)});
    folds.push_back({{"accuracy", r.folds[f].accuracy},
                     {"weighted_f1", r.folds[f].weighted_f1},
                     {"macro_f1", r.folds[f].macro_f1},
                     {"confusion", cm}});
  }
  j["folds"] = folds;
  return j.dump(2) + "\n";
}

std::string format_binary(const BinaryReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-10s %-10s %-10s %s\n%-10.1f %-10.1f %-10.1f %-10.1f %zu\n",
                "Acc.", "Precision", "Recall", "F-Score", "n", 100.0 * r.accuracy,
                100.0 * r.precision, 100.0 * r.recall, 100.0 * r.f1, r.count);
  return buf;
}

}  // namespace pbrk::cli
