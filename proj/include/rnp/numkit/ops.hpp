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

#include "rnp/numkit/tape.hpp"

// Differentiable primitives over Var. Binary elementwise ops broadcast any
// operand dimension of size 1 (at most 2-D); gradients are reduced back onto
// the broadcast dimensions.
namespace rnp::ad {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);
Var scale(Var a, double c);
Var shift(Var a, double c);
Var neg(Var a);

Var relu(Var a);
Var softplus(Var a);
Var exp(Var a);
Var log(Var a);
Var square(Var a);
Var tanh(Var a);

Var matmul(Var a, Var b);
// x·W + b with b a 1×H row broadcast over the rows of x.
Var affine(Var x, Var w, Var b);

// Sum of all entries (1×1).
Var sum(Var a);
// Column sums (1×C).
Var sum_rows(Var a);
// Row sums (R×1).
Var sum_cols(Var a);
// Column means (1×C) by pairwise summation; permutation invariant to rounding.
Var mean_rows(Var a);

// log Σ exp over all entries (1×1).
Var log_sum_exp(Var a);
// log Σ_r exp(a_rc) per column (1×C).
Var log_sum_exp_rows(Var a);
// log Σ_c exp(a_rc) per row (R×1).
Var log_sum_exp_cols(Var a);

Var slice_rows(Var a, std::size_t begin, std::size_t count);
Var concat_rows(Var top, Var bottom);
Var concat_cols(Var left, Var right);
Var reshape(Var a, std::size_t rows, std::size_t cols);

// For a: N×H and b: K×H returns the (K·N)×H matrix whose row k·N + n is
// a_n + b_k. Equivalent to concatenating every (n, k) input pair and applying
// one affine map split into its two column blocks.
Var outer_add_rows(Var a, Var b);

// Elementwise normal log density with broadcasting over y, mu, sigma.
Var gaussian_log_pdf(Var y, Var mu, Var sigma);

}  // namespace rnp::ad
