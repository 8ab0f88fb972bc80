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

#include "rnp/numkit/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "rnp/errors.hpp"

namespace rnp {

namespace {

double evaluate(const TapeFunction& f, std::span<const Tensor> params) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const Tensor& p : params) vars.push_back(tape.constant(p));
  return f(tape, vars).value().item();
}

}  // namespace

std::vector<Tensor> tape_gradient(const TapeFunction& f, std::span<const Tensor> params,
                                  double* value) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const Tensor& p : params) vars.push_back(tape.leaf(p));
  Var out = f(tape, vars);
  if (value) *value = out.value().item();
  return tape.gradient(out, vars);
}

GradCheckReport finite_diff_check(const std::function<double(std::span<const Tensor>)>& f,
                                  std::span<const Tensor> params,
                                  std::span<const Tensor> analytic, double eps) {
  if (!(eps > 0.0)) throw DomainError("finite_diff_check: eps must be positive");
  if (analytic.size() != params.size()) {
    throw ContractError("finite_diff_check: gradient count does not match params");
  }
  GradCheckReport report;
  std::vector<Tensor> work(params.begin(), params.end());
  std::size_t flat = 0;
  for (std::size_t p = 0; p < work.size(); ++p) {
    if (!analytic[p].same_shape(work[p])) {
      throw ContractError("finite_diff_check: gradient shape does not match param");
    }
    for (std::size_t i = 0; i < work[p].size(); ++i, ++flat) {
      const double saved = work[p][i];
      work[p][i] = saved + eps;
      const double up = f(work);
      work[p][i] = saved - eps;
      const double down = f(work);
      work[p][i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        if (!report.nonfinite_coordinate) report.nonfinite_coordinate = flat;
        continue;
      }
      const double numeric = (up - down) / (2.0 * eps);
      const double err = std::abs(analytic[p][i] - numeric) / std::max(1.0, std::abs(numeric));
      if (err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst_coordinate = flat;
      }
    }
  }
  report.coordinates = flat;
  return report;
}

GradCheckReport finite_diff_check(const TapeFunction& f, std::span<const Tensor> params,
                                  double eps) {
  const std::vector<Tensor> analytic = tape_gradient(f, params);
  return finite_diff_check([&f](std::span<const Tensor> p) { return evaluate(f, p); }, params,
                           analytic, eps);
}

}  // namespace rnp
