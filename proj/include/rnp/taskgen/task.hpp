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

#include <filesystem>
#include <vector>

#include "rnp/numkit/tensor.hpp"

namespace rnp {

// One meta-learning instance: M context and N target points drawn from the
// same function. Inputs are M×Dx / N×Dx, outputs M×Dy / N×Dy.
struct Task {
  Tensor x_ctx;
  Tensor y_ctx;
  Tensor x_tgt;
  Tensor y_tgt;

  std::size_t num_context() const { return x_ctx.rows(); }
  std::size_t num_target() const { return x_tgt.rows(); }
  std::size_t x_dim() const { return x_ctx.cols(); }
  std::size_t y_dim() const { return y_ctx.cols(); }

  // Context then target rows.
  Tensor x_all() const { return concat_rows(x_ctx, x_tgt); }
  Tensor y_all() const { return concat_rows(y_ctx, y_tgt); }

  // Throws DomainError unless M ≥ 1, N ≥ 1, shapes agree and values are finite.
  void validate() const;

  friend bool operator==(const Task&, const Task&) = default;
};

// JSON-lines cache: one Task object per line with keys
// x_ctx, y_ctx, x_tgt, y_tgt, each a list of rows.
void write_tasks_jsonl(const std::filesystem::path& path, const std::vector<Task>& tasks);
std::vector<Task> read_tasks_jsonl(const std::filesystem::path& path);

}  // namespace rnp
