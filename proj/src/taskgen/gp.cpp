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

#include "rnp/taskgen/gp.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

#include "rnp/errors.hpp"

namespace rnp {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::RBF:
      return "rbf";
    case KernelFamily::Matern52:
      return "matern52";
    case KernelFamily::Periodic:
      return "periodic";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "rbf") return KernelFamily::RBF;
  if (name == "matern52") return KernelFamily::Matern52;
  if (name == "periodic") return KernelFamily::Periodic;
  throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!(output_scale > 0.0)) throw DomainError("KernelSpec: output_scale must be > 0");
  if (!(lengthscale > 0.0)) throw DomainError("KernelSpec: lengthscale must be > 0");
  if (family == KernelFamily::Periodic && !(period > 0.0)) {
    throw DomainError("KernelSpec: period must be > 0");
  }
  if (!(jitter >= 0.0)) throw DomainError("KernelSpec: jitter must be >= 0");
}

double kernel_eval(const KernelSpec& spec, double x, double x2) {
  spec.validate();
  const double s2 = spec.output_scale * spec.output_scale;
  const double r = std::abs(x - x2);
  const double l = spec.lengthscale;
  switch (spec.family) {
    case KernelFamily::RBF:
      return s2 * std::exp(-r * r / (2.0 * l * l));
    case KernelFamily::Matern52: {
      const double a = std::sqrt(5.0) * r / l;
      return s2 * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    case KernelFamily::Periodic: {
      const double s = std::sin(std::numbers::pi * r / spec.period);
      return s2 * std::exp(-2.0 * s * s / (l * l));
    }
  }
  throw DomainError("kernel_eval: unknown family");
}

Tensor gram_matrix(const KernelSpec& spec, std::span<const double> xs) {
  const std::size_t n = xs.size();
  Tensor k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = kernel_eval(spec, xs[i], xs[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = kernel_eval(spec, xs[i], xs[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

KernelSpec GpHyperprior::draw(KernelFamily family, RngStream& rng) const {
  KernelSpec spec;
  spec.family = family;
  spec.jitter = jitter;
  spec.output_scale = rng.uniform(scale_lo, scale_hi);
  if (family == KernelFamily::Periodic) {
    spec.lengthscale = rng.uniform(periodic_lengthscale_lo, periodic_lengthscale_hi);
    spec.period = rng.uniform(period_lo, period_hi);
  } else {
    spec.lengthscale = rng.uniform(lengthscale_lo, lengthscale_hi);
  }
  return spec;
}

void GpSplit::validate() const {
  if (context_min < 1 || context_max < context_min) {
    throw DomainError("GpSplit: invalid context range");
  }
  if (target_min < 1 || context_max + target_min > total_max) {
    throw DomainError("GpSplit: total_max leaves no room for targets");
  }
  if (!(x_hi > x_lo)) throw DomainError("GpSplit: empty input range");
}

Tensor jittered_cholesky(const Tensor& gram, double jitter) {
  const auto n = static_cast<Eigen::Index>(gram.rows());
  double eps = jitter;
  for (int attempt = 0; attempt <= kJitterEscalations; ++attempt) {
    Eigen::MatrixXd k = gram.mat();
    k.diagonal().array() += eps;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      Tensor l(gram.rows(), gram.cols(), 0.0);
      const Eigen::MatrixXd lower = llt.matrixL();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
          l(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = lower(i, j);
      return l;
    }
    eps = eps > 0.0 ? eps * 10.0 : 1e-10;
  }
  throw GenerationError("Cholesky failed after " + std::to_string(kJitterEscalations) +
                        " jitter escalations");
}

std::vector<double> sample_gp_values(const KernelSpec& spec, std::span<const double> xs,
                                     RngStream& rng) {
  spec.validate();
  const Tensor l = jittered_cholesky(gram_matrix(spec, xs), spec.jitter);
  const std::size_t n = xs.size();
  std::vector<double> eps(n);
  for (double& e : eps) e = rng.normal();
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += l(i, j) * eps[j];
    f[i] = acc;
  }
  return f;
}

Task sample_gp_task(const KernelSpec& spec, RngStream& rng, const GpSplit& split) {
  spec.validate();
  split.validate();
  const auto m = static_cast<std::size_t>(rng.uniform_int(split.context_min, split.context_max));
  const auto n = static_cast<std::size_t>(
      rng.uniform_int(split.target_min, split.total_max - static_cast<int>(m)));
  std::vector<double> xs(m + n);
  for (double& x : xs) x = rng.uniform(split.x_lo, split.x_hi);
  const std::vector<double> f = sample_gp_values(spec, xs, rng);
  Task task{Tensor(m, 1), Tensor(m, 1), Tensor(n, 1), Tensor(n, 1)};
  for (std::size_t i = 0; i < m; ++i) {
    task.x_ctx[i] = xs[i];
    task.y_ctx[i] = f[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    task.x_tgt[i] = xs[m + i];
    task.y_tgt[i] = f[m + i];
  }
  return task;
}

}  // namespace rnp
