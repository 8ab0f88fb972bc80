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

#include <array>
#include <cstdint>

namespace rnp {

// Symmetric 2×2 covariance.
struct Cov2 {
  double s11 = 1.0;
  double s12 = 0.0;
  double s22 = 1.0;

  double det() const { return s11 * s22 - s12 * s12; }
  double correlation_sq() const { return s12 * s12 / (s11 * s22); }
  // Throws DomainError unless positive definite.
  void validate() const;
  Cov2 inverse() const;
};

// Ratio between the α-Rényi mean-field precision and the exact conditional
// precision of a zero-mean bivariate Gaussian. α ∈ (0, 1].
double rho_alpha(const Cov2& cov, double alpha);

// D_α(N(mq, Σq) ∥ N(mp, Σp)) for 2-D Gaussians; requires α·Σp + (1−α)·Σq PD.
double renyi_gaussian2(const std::array<double, 2>& mean_q, const Cov2& cov_q,
                       const std::array<double, 2>& mean_p, const Cov2& cov_p, double alpha);

struct RenyiFitOptions {
  std::size_t max_steps = 20000;
  double step_size = 1e-2;
  double tolerance = 1e-6;  // on the gradient norm
  std::uint64_t seed = 0;   // initial point
};

struct RenyiFit {
  std::array<double, 2> mean{};
  std::array<double, 2> variance{};
  std::array<double, 2> precision{};
  double divergence = 0.0;
  double grad_norm = 0.0;
  std::size_t steps = 0;
  bool converged = false;
};

// Gradient descent on (μ1, μ2, ln v1, ln v2) of D_α(q ∥ N(0, Σ)) with
// q = N(μ, diag(v1, v2)). α ∈ (0, 1); non-convergence is reported via
// RenyiFit::converged, never thrown.
RenyiFit fit_renyi_factorized(const Cov2& cov, double alpha, const RenyiFitOptions& options = {});

}  // namespace rnp
