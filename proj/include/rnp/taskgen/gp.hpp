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

#include <span>
#include <string>
#include <string_view>

#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/task.hpp"

namespace rnp {

enum class KernelFamily { RBF, Matern52, Periodic };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

struct KernelSpec {
  KernelFamily family = KernelFamily::RBF;
  double output_scale = 1.0;
  double lengthscale = 1.0;
  double period = 1.0;  // Periodic only
  double jitter = 1e-8;

  // DomainError on non-positive scale/lengthscale/period or negative jitter.
  void validate() const;
};

// RBF       s² exp(-r² / 2ℓ²)
// Matérn52  s² (1 + √5 r/ℓ + 5r²/3ℓ²) exp(-√5 r/ℓ)
// Periodic  s² exp(-2 sin²(π r / p) / ℓ²)
// with r = |x - x2|.
double kernel_eval(const KernelSpec& spec, double x, double x2);

// Symmetric Gram matrix over xs (no jitter).
Tensor gram_matrix(const KernelSpec& spec, std::span<const double> xs);

// Ranges the per-task kernel hyperparameters are drawn from.
struct GpHyperprior {
  double scale_lo = 0.1, scale_hi = 1.0;
  double lengthscale_lo = 0.1, lengthscale_hi = 0.6;
  double periodic_lengthscale_lo = 0.6, periodic_lengthscale_hi = 1.0;
  double period_lo = 0.3, period_hi = 0.5;
  double jitter = 1e-8;

  KernelSpec draw(KernelFamily family, RngStream& rng) const;
};

// Context/target size rule: M ~ U{context_min..context_max},
// N ~ U{target_min..total_max - M}; inputs uniform on [x_lo, x_hi].
struct GpSplit {
  int context_min = 3;
  int context_max = 47;
  int target_min = 3;
  int total_max = 50;
  double x_lo = -2.0;
  double x_hi = 2.0;

  void validate() const;
};

// Jitter is multiplied by 10 up to this many times before giving up.
inline constexpr int kJitterEscalations = 3;

// Lower Cholesky factor of gram + jitter·I with escalation; GenerationError
// when every attempt fails.
Tensor jittered_cholesky(const Tensor& gram, double jitter);

// One joint function draw at M + N uniform inputs, split into context/target.
Task sample_gp_task(const KernelSpec& spec, RngStream& rng, const GpSplit& split);

// Draw of f at fixed inputs (used by the covariance oracle).
std::vector<double> sample_gp_values(const KernelSpec& spec, std::span<const double> xs,
                                     RngStream& rng);

}  // namespace rnp
