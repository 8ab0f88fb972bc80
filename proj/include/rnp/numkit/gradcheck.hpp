/* Copyright 2026 The RNP Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rnp/numkit/tape.hpp"

namespace rnp {

// Scalar function built on a fresh tape from leaf copies of `params`.
using TapeFunction = std::function<Var(Tape&, std::span<const Var>)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  // Flat coordinate (over all params, in order) with the largest error.
  std::size_t worst_coordinate = 0;
  // Set when f was non-finite at a perturbed point.
  std::optional<std::size_t> nonfinite_coordinate;
  std::size_t coordinates = 0;

  bool ok(double tolerance) const {
    return !nonfinite_coordinate && max_rel_error < tolerance;
  }
};

// Reverse-mode gradient of f at params.
std::vector<Tensor> tape_gradient(const TapeFunction& f, std::span<const Tensor> params,
                                  double* value = nullptr);

// Compares the tape gradient with central differences
// (f(p + eps) - f(p - eps)) / (2 eps) per coordinate. The error of a
// coordinate is |analytic - numeric| / max(1, |numeric|).
GradCheckReport finite_diff_check(const TapeFunction& f, std::span<const Tensor> params,
                                  double eps);

// Same check against a caller-supplied analytic gradient of a plain function.
GradCheckReport finite_diff_check(const std::function<double(std::span<const Tensor>)>& f,
                                  std::span<const Tensor> params,
                                  std::span<const Tensor> analytic, double eps);

}  // namespace rnp
