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

#include "rnp/oracles/renyi_gaussian.hpp"

#include <cmath>
#include <string>

#include "rnp/errors.hpp"
#include "rnp/numkit/rng.hpp"

namespace rnp {

void Cov2::validate() const {
  if (!(std::isfinite(s11) && std::isfinite(s12) && std::isfinite(s22))) {
    throw DomainError("Cov2: entries must be finite");
  }
  if (!(s11 > 0.0 && s22 > 0.0 && det() > 0.0)) {
    throw DomainError("Cov2: matrix is not positive definite");
  }
}

Cov2 Cov2::inverse() const {
  validate();
  const double d = det();
  return {s22 / d, -s12 / d, s11 / d};
}

double rho_alpha(const Cov2& cov, double alpha) {
  cov.validate();
  if (!(alpha > 0.0)) throw DomainError("rho_alpha: alpha must be > 0");
  if (alpha > 1.0) throw DomainError("rho_alpha: alpha must be <= 1");
  const double disc = 1.0 - 4.0 * alpha * (1.0 - alpha) * cov.correlation_sq();
  if (disc < 0.0) throw DomainError("rho_alpha: negative discriminant");
  return ((2.0 * alpha - 1.0) + std::sqrt(disc)) / (2.0 * alpha);
}

double renyi_gaussian2(const std::array<double, 2>& mean_q, const Cov2& cov_q,
                       const std::array<double, 2>& mean_p, const Cov2& cov_p, double alpha) {
  cov_q.validate();
  cov_p.validate();
  if (!std::isfinite(alpha) || alpha == 1.0) {
    throw DomainError("renyi_gaussian2: alpha must be finite and != 1");
  }
  const Cov2 mix{alpha * cov_p.s11 + (1.0 - alpha) * cov_q.s11,
                 alpha * cov_p.s12 + (1.0 - alpha) * cov_q.s12,
                 alpha * cov_p.s22 + (1.0 - alpha) * cov_q.s22};
  if (!(mix.s11 > 0.0 && mix.s22 > 0.0 && mix.det() > 0.0)) {
    throw DomainError("renyi_gaussian2: mixed covariance is not positive definite");
  }
  const Cov2 inv = mix.inverse();
  const double d1 = mean_q[0] - mean_p[0];
  const double d2 = mean_q[1] - mean_p[1];
  const double quad = inv.s11 * d1 * d1 + 2.0 * inv.s12 * d1 * d2 + inv.s22 * d2 * d2;
  const double logdet = std::log(mix.det()) - (1.0 - alpha) * std::log(cov_q.det()) -
                        alpha * std::log(cov_p.det());
  return -logdet / (2.0 * (alpha - 1.0)) + 0.5 * alpha * quad;
}

namespace {

struct Objective {
  double value;
  std::array<double, 4> grad;  // (μ1, μ2, u1, u2), u = ln v
};

Objective evaluate(const Cov2& p, double alpha, const std::array<double, 4>& x) {
  const double v1 = std::exp(x[2]);
  const double v2 = std::exp(x[3]);
  const double a = alpha * p.s11 + (1.0 - alpha) * v1;
  const double b = alpha * p.s12;
  const double c = alpha * p.s22 + (1.0 - alpha) * v2;
  const double det = a * c - b * b;
  if (!(a > 0.0 && c > 0.0 && det > 0.0)) {
    throw NumericError("fit_renyi_factorized: mixed covariance lost definiteness");
  }
  // Σα⁻¹ μ
  const double g1 = (c * x[0] - b * x[1]) / det;
  const double g2 = (-b * x[0] + a * x[1]) / det;
  Objective o;
  o.value = -(std::log(det) - (1.0 - alpha) * (x[2] + x[3]) - alpha * std::log(p.det())) /
                (2.0 * (alpha - 1.0)) +
            0.5 * alpha * (x[0] * g1 + x[1] * g2);
  o.grad[0] = alpha * g1;
  o.grad[1] = alpha * g2;
  o.grad[2] = 0.5 * (v1 * c / det - 1.0) - 0.5 * alpha * (1.0 - alpha) * v1 * g1 * g1;
  o.grad[3] = 0.5 * (v2 * a / det - 1.0) - 0.5 * alpha * (1.0 - alpha) * v2 * g2 * g2;
  return o;
}

}  // namespace

RenyiFit fit_renyi_factorized(const Cov2& cov, double alpha, const RenyiFitOptions& options) {
  cov.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("fit_renyi_factorized: alpha must lie in (0, 1)");
  }
  if (!(options.step_size > 0.0)) throw DomainError("fit_renyi_factorized: step_size must be > 0");
  RngStream rng(options.seed, "oracle/renyi_fit");
  std::array<double, 4> x{0.5 * rng.normal(), 0.5 * rng.normal(), rng.uniform(-0.5, 0.5),
                          rng.uniform(-0.5, 0.5)};
  RenyiFit fit;
  Objective o = evaluate(cov, alpha, x);
  for (;;) {
    double n2 = 0.0;
    for (double g : o.grad) n2 += g * g;
    fit.grad_norm = std::sqrt(n2);
    if (fit.grad_norm < options.tolerance) {
      fit.converged = true;
      break;
    }
    if (fit.steps == options.max_steps) break;
    for (std::size_t i = 0; i < 4; ++i) x[i] -= options.step_size * o.grad[i];
    o = evaluate(cov, alpha, x);
    ++fit.steps;
  }
  fit.mean = {x[0], x[1]};
  fit.variance = {std::exp(x[2]), std::exp(x[3])};
  fit.precision = {1.0 / fit.variance[0], 1.0 / fit.variance[1]};
  fit.divergence = o.value;
  return fit;
}

}  // namespace rnp
