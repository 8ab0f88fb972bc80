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

#include "rnp/objectives/divergence.hpp"

#include <cmath>

#include "rnp/errors.hpp"
#include "rnp/numkit/ops.hpp"

namespace rnp {
namespace {

void check_pair(const DiagGaussian& q, const DiagGaussian& p) {
  if (q.mean.size() != p.mean.size() || q.std.size() != q.mean.size() ||
      p.std.size() != p.mean.size()) {
    throw ContractError("divergence: dimension mismatch");
  }
  for (std::size_t d = 0; d < q.dim(); ++d) {
    if (!(q.std[d] > 0.0) || !(p.std[d] > 0.0)) {
      throw DomainError("divergence: std must be positive (dimension " + std::to_string(d) + ")");
    }
  }
}

}  // namespace

double kl_diag(const DiagGaussian& q, const DiagGaussian& p) {
  check_pair(q, p);
  double total = 0.0;
  for (std::size_t d = 0; d < q.dim(); ++d) {
    const double vq = q.std[d] * q.std[d];
    const double vp = p.std[d] * p.std[d];
    const double dm = q.mean[d] - p.mean[d];
    total += std::log(p.std[d] / q.std[d]) + (vq + dm * dm) / (2.0 * vp) - 0.5;
  }
  return total;
}

double renyi_diag(const DiagGaussian& q, const DiagGaussian& p, double alpha) {
  check_pair(q, p);
  if (!std::isfinite(alpha)) throw DomainError("renyi_diag: alpha must be finite");
  if (alpha == 1.0) return kl_diag(q, p);
  double total = 0.0;
  for (std::size_t d = 0; d < q.dim(); ++d) {
    const double vq = q.std[d] * q.std[d];
    const double vp = p.std[d] * p.std[d];
    const double vmix = alpha * vp + (1.0 - alpha) * vq;
    if (!(vmix > 0.0)) {
      throw DomainError("renyi_diag: mixed variance not positive in dimension " +
                        std::to_string(d));
    }
    const double dm = q.mean[d] - p.mean[d];
    total += std::log(p.std[d] / q.std[d]) + std::log(vp / vmix) / (2.0 * (alpha - 1.0)) +
             alpha * dm * dm / (2.0 * vmix);
  }
  return total;
}

Var kl_diag(const LatentVars& q, const LatentVars& p) {
  using namespace ad;
  // ln σp − ln σq + (σq² + (μq−μp)²)/(2σp²) − 1/2, summed.
  Var ratio = div(add(square(q.std), square(sub(q.mean, p.mean))), scale(square(p.std), 2.0));
  Var terms = shift(add(sub(log(p.std), log(q.std)), ratio), -0.5);
  return sum(terms);
}

Var diag_log_density(const LatentVars& dist, Var z) {
  return ad::sum_cols(ad::gaussian_log_pdf(z, dist.mean, dist.std));
}

}  // namespace rnp
