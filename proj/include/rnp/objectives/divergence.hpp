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

#include "rnp/npmodel/model.hpp"

namespace rnp {

// KL(q ∥ p) between diagonal Gaussians, summed over dimensions.
double kl_diag(const DiagGaussian& q, const DiagGaussian& p);

// D_α(q ∥ p) = 1/(α−1)·ln ∫ q^α p^(1−α), summed over dimensions. Requires the
// mixed variance α·σp² + (1−α)·σq² to be positive in every dimension; α = 1
// returns the KL divergence.
double renyi_diag(const DiagGaussian& q, const DiagGaussian& p, double alpha);

// Differentiable KL(q ∥ p); 1×1.
Var kl_diag(const LatentVars& q, const LatentVars& p);

// log N(z_k; mean, diag(std²)) per row of z; K×1.
Var diag_log_density(const LatentVars& dist, Var z);

}  // namespace rnp
