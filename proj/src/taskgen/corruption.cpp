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

#include "rnp/taskgen/corruption.hpp"

#include "rnp/errors.hpp"

namespace rnp {

Task corrupt_context(const Task& task, const CorruptionSpec& spec, RngStream& rng) {
  if (!(spec.beta >= 0.0 && spec.beta <= 1.0)) {
    throw DomainError("corrupt_context: beta must lie in [0, 1]");
  }
  Task out = task;
  if (spec.beta == 0.0) return out;
  for (double& y : out.y_ctx.values()) y = (1.0 - spec.beta) * y + spec.beta * rng.normal();
  return out;
}

}  // namespace rnp
