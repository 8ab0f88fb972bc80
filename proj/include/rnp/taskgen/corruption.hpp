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

#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/task.hpp"

namespace rnp {

struct CorruptionSpec {
  double beta = 0.0;  // in [0, 1]; 0 is the identity
};

// Copy of task with y_ctx replaced by (1 - β) y + β ε, ε ~ N(0, 1) drawn
// elementwise from rng. Inputs and targets are left untouched.
Task corrupt_context(const Task& task, const CorruptionSpec& spec, RngStream& rng);

}  // namespace rnp
