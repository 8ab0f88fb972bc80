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

#include <cmath>
#include <numbers>
#include <span>

namespace rnp {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2π)

// log Σ exp(v_i) with a max shift. Throws DomainError on an empty span.
// +inf entries give +inf; an all -inf input gives -inf.
double log_sum_exp(std::span<const double> v);

// log of the arithmetic mean of exp(v_i).
double log_mean_exp(std::span<const double> v);

// Univariate normal log density; throws DomainError unless sigma > 0.
double gaussian_log_pdf(double y, double mu, double sigma);

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Pairwise (tree) summation; the result depends only on the multiset of
// inputs up to O(log n) rounding.
double pairwise_sum(std::span<const double> v);

}  // namespace rnp
