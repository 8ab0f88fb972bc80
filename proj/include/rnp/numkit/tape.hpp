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

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "rnp/numkit/tensor.hpp"

namespace rnp {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while its Tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;
  Tape* tape() const { return tape_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so node ids are
// a topological order and the adjoint sweep is a single reverse pass.
// Single-writer: one tape per thread.
class Tape {
 public:
  // Propagates the adjoint of the node it belongs to into its parents.
  using BackwardFn = std::function<void(Tape&, const Tensor& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value);
  Var constant(Tensor value);
  // Records an op result. The backward function is dropped when no parent
  // requires a gradient.
  Var record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward);

  const Tensor& value(Var v) const { return nodes_[v.id()].value; }
  // Value of the node with the given id; lets a backward pass read its own output.
  const Tensor& node_value(std::uint32_t id) const { return nodes_[id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }

  // Gradient buffer of `v` for accumulation during the sweep, zero-filled on
  // first touch; nullptr when `v` does not require a gradient.
  Tensor* grad_buffer(Var v);
  // As above, but on first touch the buffer is left unfilled and `fresh` is
  // set; the caller must then assign every entry instead of accumulating.
  Tensor* grad_buffer(Var v, bool& fresh);

  // d output / d wrt_i. `output` must be 1×1 (ContractError otherwise);
  // nodes unreachable from output get exact zeros.
  std::vector<Tensor> gradient(Var output, std::span<const Var> wrt);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    bool requires_grad = false;
    bool grad_live = false;
  };

  Var push(Node node);
  void check_owner(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace rnp
