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

#include "rnp/numkit/tape.hpp"

#include <string>

#include "rnp/errors.hpp"

namespace rnp {

const Tensor& Var::value() const { return tape_->value(*this); }

bool Var::requires_grad() const { return tape_->requires_grad(*this); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

void Tape::check_owner(Var v) const {
  if (v.tape() != this) throw ContractError("Var used with a tape that does not own it");
}

Var Tape::leaf(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (Var p : parents) {
    check_owner(p);
    n.requires_grad = n.requires_grad || nodes_[p.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

Tensor* Tape::grad_buffer(Var v) {
  Node& n = nodes_[v.id()];
  if (!n.requires_grad) return nullptr;
  if (!n.grad_live) {
    if (n.grad.same_shape(n.value)) {
      n.grad.fill(0.0);
    } else {
      n.grad = Tensor(n.value.rows(), n.value.cols(), 0.0);
    }
    n.grad_live = true;
  }
  return &n.grad;
}

Tensor* Tape::grad_buffer(Var v, bool& fresh) {
  Node& n = nodes_[v.id()];
  fresh = false;
  if (!n.requires_grad) return nullptr;
  if (!n.grad_live) {
    if (!n.grad.same_shape(n.value)) n.grad = Tensor::uninitialized(n.value.rows(), n.value.cols());
    n.grad_live = true;
    fresh = true;
  }
  return &n.grad;
}

std::vector<Tensor> Tape::gradient(Var output, std::span<const Var> wrt) {
  check_owner(output);
  const Tensor& out = nodes_[output.id()].value;
  if (out.rows() != 1 || out.cols() != 1) {
    throw ContractError("backward: output must be scalar, got " + std::to_string(out.rows()) +
                        "x" + std::to_string(out.cols()));
  }
  for (Node& n : nodes_) n.grad_live = false;
  if (Tensor* g = grad_buffer(output)) (*g)[0] = 1.0;
  for (std::size_t i = output.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad_live && n.backward) n.backward(*this, n.grad);
  }
  std::vector<Tensor> grads;
  grads.reserve(wrt.size());
  for (Var v : wrt) {
    check_owner(v);
    const Node& n = nodes_[v.id()];
    if (n.grad_live) {
      grads.push_back(n.grad);
    } else {
      grads.emplace_back(n.value.rows(), n.value.cols(), 0.0);
    }
  }
  return grads;
}

}  // namespace rnp
