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

#include "pbrk/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>
#include <numeric>
#include <vector>

#include "pbrk/error.hpp"
#include "pbrk/rng.hpp"

namespace pbrk {
namespace {

// Least-squares fit of an odd quintic to f(t) - f(-t) at `points` offsets
// evenly spaced in (0, h]; the linear coefficient is 2 f'(0). Rounding
// noise in individual loss values averages out across the points.
template <class F>
double derivative(F&& f, double h, std::size_t points) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t k = 1; k <= points; ++k) {
    const double t = h * static_cast<double>(k) / static_cast<double>(points);
    const double u = t / h;  // basis scaled to [0, 1] for conditioning
    const Eigen::Vector3d basis(u, u * u * u, u * u * u * u * u);
    const double g = f(t) - f(-t);
    normal += basis * basis.transpose();
    rhs += basis * g;
  }
  const Eigen::Vector3d coef = normal.ldlt().solve(rhs);
  return coef[0] / (2.0 * h);
}

void record(GradCheckResult& result, const std::string& name, std::size_t index,
            double analytic, double numeric, double floor) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  const double rel = std::fabs(analytic - numeric) / denom;
  ++result.checked;
  if (result.worst_param.empty() || rel > result.max_rel_error) {
    result.max_rel_error = rel;
    result.worst_param = name;
    result.worst_index = index;
    result.worst_analytic = analytic;
    result.worst_numeric = numeric;
  }
}

}  // namespace

GradCheckResult grad_check(const LossFunction& loss, ParamSet& params,
                           const GradCheckOptions& opts) {
  if (!(opts.eps > 0.0) || opts.points < 3 || !(opts.floor > 0.0))
    throw InvalidInput("grad_check: eps and floor must be positive, points >= 3");
  Gradients analytic = params.zeros_like();
  loss(params, &analytic);
  Rng rng(opts.seed);
  GradCheckResult result;
  for (std::size_t p = 0; p < params.count(); ++p) {
    Tensor& tensor = params[p];
    const auto grad = analytic[p].data();
    std::vector<std::size_t> coords(tensor.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > opts.samples_per_tensor) {
      rng.shuffle(coords.begin(), coords.end());
      coords.resize(opts.samples_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t i : coords) {
      const float saved = tensor[i];
      auto at = [&](double t) {
        tensor[i] = static_cast<float>(saved + t);
        return loss(params, nullptr);
      };
      const double numeric = derivative(at, opts.eps, opts.points);
      tensor[i] = saved;
      record(result, params.name(p), i, grad[i], numeric, opts.floor);
    }
  }
  return result;
}

}  // namespace pbrk
