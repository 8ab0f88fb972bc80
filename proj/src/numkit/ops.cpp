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

#include "rnp/numkit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rnp/errors.hpp"
#include "rnp/numkit/logspace.hpp"

namespace rnp::ad {

namespace {

// Index strides of an operand broadcast into an R×C result.
struct Strides {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t at(std::size_t r, std::size_t c) const { return r * row + c * col; }
};

std::size_t broadcast_dim(std::size_t a, std::size_t b, const char* op) {
  if (a == b || b == 1) return a;
  if (a == 1) return b;
  throw ContractError(std::string(op) + ": incompatible shapes for broadcasting");
}

Strides strides_for(const Tensor& t, std::size_t rows, std::size_t cols, const char* op) {
  if ((t.rows() != rows && t.rows() != 1) || (t.cols() != cols && t.cols() != 1)) {
    throw ContractError(std::string(op) + ": operand cannot broadcast to result");
  }
  return Strides{t.rows() == 1 ? 0 : t.cols(), t.cols() == 1 ? std::size_t{0} : 1};
}

void require_same_tape(Var a, Var b) {
  if (a.tape() != b.tape()) throw ContractError("ops: operands live on different tapes");
}

// f(x, y) -> value; dfdx / dfdy (x, y) -> partials.
template <class F, class FX, class FY>
Var binary(Var a, Var b, const char* name, F f, FX dfdx, FY dfdy) {
  require_same_tape(a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  const std::size_t rows = broadcast_dim(ta.rows(), tb.rows(), name);
  const std::size_t cols = broadcast_dim(ta.cols(), tb.cols(), name);
  const Strides sa = strides_for(ta, rows, cols, name);
  const Strides sb = strides_for(tb, rows, cols, name);
  Tensor out = Tensor::uninitialized(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = f(ta[sa.at(r, c)], tb[sb.at(r, c)]);
  }
  Tape& tape = *a.tape();
  return tape.record(std::move(out), {a, b},
                     [a, b, sa, sb, rows, cols, dfdx, dfdy](Tape& t, const Tensor& g) {
                       const Tensor& xa = t.value(a);
                       const Tensor& xb = t.value(b);
                       const auto pass = [&](Var v, const Strides& sv, auto&& partial) {
                         const bool full = t.value(v).rows() == rows && t.value(v).cols() == cols;
                         bool fresh = false;
                         Tensor* gv = full ? t.grad_buffer(v, fresh) : t.grad_buffer(v);
                         if (gv == nullptr) return;
                         for (std::size_t r = 0; r < rows; ++r)
                           for (std::size_t c = 0; c < cols; ++c) {
                             const double d = g(r, c) * partial(xa[sa.at(r, c)], xb[sb.at(r, c)]);
                             double& dst = (*gv)[sv.at(r, c)];
                             dst = fresh ? d : dst + d;
                           }
                       };
                       pass(a, sa, dfdx);
                       pass(b, sb, dfdy);
                     });
}

// Unary op with its local derivative computed during the forward pass.
template <class F, class D>
Var unary(Var a, F f, D dfdx) {
  const Tensor& ta = a.value();
  Tensor out = Tensor::uninitialized(ta.rows(), ta.cols());
  Tensor local = Tensor::uninitialized(ta.rows(), ta.cols());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    out[i] = f(ta[i]);
    local[i] = dfdx(ta[i], out[i]);
  }
  return a.tape()->record(std::move(out), {a},
                          [a, local = std::move(local)](Tape& t, const Tensor& g) {
                            bool fresh = false;
                            Tensor* ga = t.grad_buffer(a, fresh);
                            if (fresh) {
                              for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] = g[i] * local[i];
                            } else {
                              for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * local[i];
                            }
                          });
}

}  // namespace

Var add(Var a, Var b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Var div(Var a, Var b) {
  return binary(
      a, b, "div", [](double x, double y) { return x / y; },
      [](double, double y) { return 1.0 / y; }, [](double x, double y) { return -x / (y * y); });
}

Var scale(Var a, double c) {
  return unary(a, [c](double x) { return c * x; }, [c](double, double) { return c; });
}

Var shift(Var a, double c) {
  return unary(a, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Var neg(Var a) { return scale(a, -1.0); }

Var relu(Var a) {
  const Tensor& ta = a.value();
  Tensor out = Tensor::uninitialized(ta.rows(), ta.cols());
  out.mat().array() = (ta.mat().array() > 0.0).select(ta.mat().array(), 0.0);
  // The output is positive exactly where the derivative is 1.
  const std::uint32_t self = static_cast<std::uint32_t>(a.tape()->size());
  return a.tape()->record(std::move(out), {a}, [a, self](Tape& t, const Tensor& g) {
    const auto y = t.node_value(self).mat().array();
    bool fresh = false;
    Tensor* ga = t.grad_buffer(a, fresh);
    if (fresh) {
      ga->mat().array() = (y > 0.0).select(g.mat().array(), 0.0);
    } else {
      ga->mat().array() += (y > 0.0).select(g.mat().array(), 0.0);
    }
  });
}

Var softplus(Var a) {
  return unary(
      a, [](double x) { return rnp::softplus(x); },
      [](double x, double) { return rnp::sigmoid(x); });
}

Var exp(Var a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  return unary(a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var square(Var a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var tanh(Var a) {
  return unary(
      a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (ta.cols() != tb.rows()) {
    throw ContractError("matmul: inner dimensions " + std::to_string(ta.cols()) + " and " +
                        std::to_string(tb.rows()) + " differ");
  }
  Tensor out = Tensor::uninitialized(ta.rows(), tb.cols());
  out.mat().noalias() = ta.mat() * tb.mat();
  return a.tape()->record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    bool fresh = false;
    if (Tensor* ga = t.grad_buffer(a, fresh)) {
      if (fresh) {
        ga->mat().noalias() = g.mat() * t.value(b).mat().transpose();
      } else {
        ga->mat().noalias() += g.mat() * t.value(b).mat().transpose();
      }
    }
    if (Tensor* gb = t.grad_buffer(b, fresh)) {
      if (fresh) {
        gb->mat().noalias() = t.value(a).mat().transpose() * g.mat();
      } else {
        gb->mat().noalias() += t.value(a).mat().transpose() * g.mat();
      }
    }
  });
}

Var affine(Var x, Var w, Var b) {
  require_same_tape(x, w);
  require_same_tape(x, b);
  const Tensor& tx = x.value();
  const Tensor& tw = w.value();
  const Tensor& tb = b.value();
  if (tx.cols() != tw.rows()) throw ContractError("affine: inner dimensions differ");
  if (tb.rows() != 1 || tb.cols() != tw.cols()) throw ContractError("affine: bias must be 1xH");
  Tensor out = Tensor::uninitialized(tx.rows(), tw.cols());
  out.mat().noalias() = tx.mat() * tw.mat();
  out.mat().rowwise() += tb.mat().row(0);
  return x.tape()->record(std::move(out), {x, w, b}, [x, w, b](Tape& t, const Tensor& g) {
    bool fresh = false;
    if (Tensor* gx = t.grad_buffer(x, fresh)) {
      if (fresh) {
        gx->mat().noalias() = g.mat() * t.value(w).mat().transpose();
      } else {
        gx->mat().noalias() += g.mat() * t.value(w).mat().transpose();
      }
    }
    if (Tensor* gw = t.grad_buffer(w, fresh)) {
      if (fresh) {
        gw->mat().noalias() = t.value(x).mat().transpose() * g.mat();
      } else {
        gw->mat().noalias() += t.value(x).mat().transpose() * g.mat();
      }
    }
    if (Tensor* gb = t.grad_buffer(b)) {
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) (*gb)[c] += g(r, c);
    }
  });
}

Var sum(Var a) {
  const Tensor& ta = a.value();
  double acc = 0.0;
  for (double v : ta.values()) acc += v;
  return a.tape()->record(Tensor::scalar(acc), {a}, [a](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    for (double& v : ga->values()) v += g[0];
  });
}

Var sum_rows(Var a) {
  const Tensor& ta = a.value();
  Tensor out(1, ta.cols(), 0.0);
  for (std::size_t r = 0; r < ta.rows(); ++r)
    for (std::size_t c = 0; c < ta.cols(); ++c) out[c] += ta(r, c);
  return a.tape()->record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    for (std::size_t r = 0; r < ga->rows(); ++r)
      for (std::size_t c = 0; c < ga->cols(); ++c) (*ga)(r, c) += g[c];
  });
}

Var sum_cols(Var a) {
  const Tensor& ta = a.value();
  Tensor out(ta.rows(), 1, 0.0);
  for (std::size_t r = 0; r < ta.rows(); ++r)
    for (std::size_t c = 0; c < ta.cols(); ++c) out[r] += ta(r, c);
  return a.tape()->record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    for (std::size_t r = 0; r < ga->rows(); ++r)
      for (std::size_t c = 0; c < ga->cols(); ++c) (*ga)(r, c) += g[r];
  });
}

Var mean_rows(Var a) {
  const Tensor& ta = a.value();
  if (ta.rows() == 0) throw DomainError("mean_rows: no rows");
  const double n = static_cast<double>(ta.rows());
  Tensor out = Tensor::uninitialized(1, ta.cols());
  std::vector<double> column(ta.rows());
  for (std::size_t c = 0; c < ta.cols(); ++c) {
    for (std::size_t r = 0; r < ta.rows(); ++r) column[r] = ta(r, c);
    out[c] = pairwise_sum(column) / n;
  }
  return a.tape()->record(std::move(out), {a}, [a, n](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    for (std::size_t r = 0; r < ga->rows(); ++r)
      for (std::size_t c = 0; c < ga->cols(); ++c) (*ga)(r, c) += g[c] / n;
  });
}

namespace {

// Shared kernel for the three log-sum-exp reductions. `group(r, c)` maps an
// input entry to its output slot.
template <class Group>
Var lse_reduce(Var a, std::size_t out_rows, std::size_t out_cols, Group group) {
  const Tensor& ta = a.value();
  if (ta.size() == 0) throw DomainError("log_sum_exp: empty input");
  const double ninf = -std::numeric_limits<double>::infinity();
  Tensor maxes(out_rows, out_cols, ninf);
  for (std::size_t r = 0; r < ta.rows(); ++r)
    for (std::size_t c = 0; c < ta.cols(); ++c) {
      double& m = maxes[group(r, c)];
      m = std::max(m, ta(r, c));
    }
  Tensor sums(out_rows, out_cols, 0.0);
  Tensor weights = Tensor::uninitialized(ta.rows(), ta.cols());
  for (std::size_t r = 0; r < ta.rows(); ++r)
    for (std::size_t c = 0; c < ta.cols(); ++c) {
      const std::size_t k = group(r, c);
      const double e = std::isfinite(maxes[k]) ? std::exp(ta(r, c) - maxes[k]) : 0.0;
      weights(r, c) = e;
      sums[k] += e;
    }
  Tensor out = Tensor::uninitialized(out_rows, out_cols);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::isfinite(maxes[k]) ? maxes[k] + std::log(sums[k]) : maxes[k];
  for (std::size_t r = 0; r < ta.rows(); ++r)
    for (std::size_t c = 0; c < ta.cols(); ++c) {
      const std::size_t k = group(r, c);
      weights(r, c) = sums[k] > 0.0 ? weights(r, c) / sums[k] : 0.0;
    }
  return a.tape()->record(std::move(out), {a},
                          [a, group, weights = std::move(weights)](Tape& t, const Tensor& g) {
                            Tensor* ga = t.grad_buffer(a);
                            for (std::size_t r = 0; r < ga->rows(); ++r)
                              for (std::size_t c = 0; c < ga->cols(); ++c)
                                (*ga)(r, c) += g[group(r, c)] * weights(r, c);
                          });
}

}  // namespace

Var log_sum_exp(Var a) {
  return lse_reduce(a, 1, 1, [](std::size_t, std::size_t) { return std::size_t{0}; });
}

Var log_sum_exp_rows(Var a) {
  return lse_reduce(a, 1, a.cols(), [](std::size_t, std::size_t c) { return c; });
}

Var log_sum_exp_cols(Var a) {
  return lse_reduce(a, a.rows(), 1, [](std::size_t r, std::size_t) { return r; });
}

Var slice_rows(Var a, std::size_t begin, std::size_t count) {
  Tensor out = a.value().slice_rows(begin, count);
  return a.tape()->record(std::move(out), {a}, [a, begin](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    const std::size_t offset = begin * ga->cols();
    for (std::size_t i = 0; i < g.size(); ++i) (*ga)[offset + i] += g[i];
  });
}

Var concat_rows(Var top, Var bottom) {
  require_same_tape(top, bottom);
  Tensor out = rnp::concat_rows(top.value(), bottom.value());
  const std::size_t split = top.value().size();
  return top.tape()->record(std::move(out), {top, bottom},
                            [top, bottom, split](Tape& t, const Tensor& g) {
                              if (Tensor* gt = t.grad_buffer(top))
                                for (std::size_t i = 0; i < split; ++i) (*gt)[i] += g[i];
                              if (Tensor* gb = t.grad_buffer(bottom))
                                for (std::size_t i = split; i < g.size(); ++i)
                                  (*gb)[i - split] += g[i];
                            });
}

Var concat_cols(Var left, Var right) {
  require_same_tape(left, right);
  const Tensor& tl = left.value();
  const Tensor& tr = right.value();
  if (tl.rows() != tr.rows()) throw ContractError("concat_cols: row mismatch");
  const std::size_t rows = tl.rows();
  const std::size_t cl = tl.cols();
  const std::size_t cr = tr.cols();
  Tensor out = Tensor::uninitialized(rows, cl + cr);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cl; ++c) out(r, c) = tl(r, c);
    for (std::size_t c = 0; c < cr; ++c) out(r, cl + c) = tr(r, c);
  }
  return left.tape()->record(std::move(out), {left, right},
                             [left, right, rows, cl, cr](Tape& t, const Tensor& g) {
                               if (Tensor* gl = t.grad_buffer(left))
                                 for (std::size_t r = 0; r < rows; ++r)
                                   for (std::size_t c = 0; c < cl; ++c) (*gl)(r, c) += g(r, c);
                               if (Tensor* gr = t.grad_buffer(right))
                                 for (std::size_t r = 0; r < rows; ++r)
                                   for (std::size_t c = 0; c < cr; ++c)
                                     (*gr)(r, c) += g(r, cl + c);
                             });
}

Var reshape(Var a, std::size_t rows, std::size_t cols) {
  Tensor out = a.value().reshaped(rows, cols);
  return a.tape()->record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
  });
}

Var outer_add_rows(Var a, Var b) {
  require_same_tape(a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (ta.cols() != tb.cols()) throw ContractError("outer_add_rows: column mismatch");
  const std::size_t n = ta.rows();
  const std::size_t k = tb.rows();
  const std::size_t h = ta.cols();
  Tensor out = Tensor::uninitialized(k * n, h);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double* dst = &out(i * n + j, 0);
      const double* ra = ta.values().data() + j * h;
      const double* rb = tb.values().data() + i * h;
      for (std::size_t c = 0; c < h; ++c) dst[c] = ra[c] + rb[c];
    }
  return a.tape()->record(std::move(out), {a, b}, [a, b, n, k, h](Tape& t, const Tensor& g) {
    Tensor* ga = t.grad_buffer(a);
    Tensor* gb = t.grad_buffer(b);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double* src = g.values().data() + (i * n + j) * h;
        if (ga) {
          double* d = &(*ga)(j, 0);
          for (std::size_t c = 0; c < h; ++c) d[c] += src[c];
        }
        if (gb) {
          double* d = &(*gb)(i, 0);
          for (std::size_t c = 0; c < h; ++c) d[c] += src[c];
        }
      }
  });
}

Var gaussian_log_pdf(Var y, Var mu, Var sigma) {
  require_same_tape(y, mu);
  require_same_tape(y, sigma);
  const Tensor& ty = y.value();
  const Tensor& tm = mu.value();
  const Tensor& ts = sigma.value();
  const char* name = "gaussian_log_pdf";
  const std::size_t rows = broadcast_dim(broadcast_dim(ty.rows(), tm.rows(), name), ts.rows(), name);
  const std::size_t cols = broadcast_dim(broadcast_dim(ty.cols(), tm.cols(), name), ts.cols(), name);
  const Strides sy = strides_for(ty, rows, cols, name);
  const Strides sm = strides_for(tm, rows, cols, name);
  const Strides ss = strides_for(ts, rows, cols, name);
  Tensor out = Tensor::uninitialized(rows, cols);
  // Standardized residual and 1/sigma, reused by the backward pass.
  Tensor resid = Tensor::uninitialized(rows, cols);
  Tensor inv_sigma = Tensor::uninitialized(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double s = ts[ss.at(r, c)];
      if (!(s > 0.0)) throw DomainError("gaussian_log_pdf: sigma must be positive");
      const double inv = 1.0 / s;
      const double z = (ty[sy.at(r, c)] - tm[sm.at(r, c)]) * inv;
      resid(r, c) = z;
      inv_sigma(r, c) = inv;
      out(r, c) = -kHalfLog2Pi - std::log(s) - 0.5 * z * z;
    }
  return y.tape()->record(
      std::move(out), {y, mu, sigma},
      [y, mu, sigma, sy, sm, ss, rows, cols, resid = std::move(resid),
       inv_sigma = std::move(inv_sigma)](Tape& t, const Tensor& g) {
        Tensor* gy = t.grad_buffer(y);
        Tensor* gm = t.grad_buffer(mu);
        Tensor* gs = t.grad_buffer(sigma);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) {
            const double z = resid(r, c);
            const double inv = inv_sigma(r, c);
            const double gv = g(r, c);
            if (gy) (*gy)[sy.at(r, c)] -= gv * z * inv;
            if (gm) (*gm)[sm.at(r, c)] += gv * z * inv;
            if (gs) (*gs)[ss.at(r, c)] += gv * (z * z - 1.0) * inv;
          }
      });
}

}  // namespace rnp::ad
