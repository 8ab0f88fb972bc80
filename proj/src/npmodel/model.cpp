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

#include "rnp/npmodel/model.hpp"

#include "rnp/errors.hpp"
#include "rnp/numkit/ops.hpp"

namespace rnp {
namespace {

void require_finite(Var v, const char* stage, std::size_t layer) {
  if (!v.value().all_finite()) {
    throw NumericError(std::string(stage) + " layer " + std::to_string(layer) +
                       " produced non-finite activations");
  }
}

BoundParams bind(Tape& tape, const NPParams& params, bool leaves) {
  BoundParams b;
  b.params = &params;
  b.vars.reserve(params.size());
  for (const Tensor& t : params.values()) b.vars.push_back(leaves ? tape.leaf(t) : tape.constant(t));
  return b;
}

Var affine(const BoundParams& p, const std::string& prefix, Var x) {
  return ad::affine(x, p[prefix + ".weight"], p[prefix + ".bias"]);
}

}  // namespace

BoundParams bind_leaves(Tape& tape, const NPParams& params) { return bind(tape, params, true); }

BoundParams bind_constants(Tape& tape, const NPParams& params) {
  return bind(tape, params, false);
}

Var encode_points(const BoundParams& p, Var xs, Var ys) {
  const ModelConfig& c = p.config();
  if (xs.rows() == 0) throw DomainError("encode: empty point set");
  if (xs.rows() != ys.rows() || xs.cols() != c.x_dim || ys.cols() != c.y_dim) {
    throw ContractError("encode: input shape does not match model config");
  }
  Var h = ad::concat_cols(xs, ys);
  for (std::size_t l = 0; l < c.encoder_layers; ++l) {
    h = ad::relu(affine(p, "encoder." + std::to_string(l), h));
    require_finite(h, "encoder", l);
  }
  h = affine(p, "encoder.out", h);
  require_finite(h, "encoder", c.encoder_layers);
  return h;
}

Var pool_embeddings(Var point_embeddings) { return ad::mean_rows(point_embeddings); }

Var encode_set(const BoundParams& p, Var xs, Var ys) {
  return pool_embeddings(encode_points(p, xs, ys));
}

LatentVars latent_dist(const BoundParams& p, Var embedding) {
  const ModelConfig& c = p.config();
  if (!embedding.value().all_finite()) throw DomainError("latent_dist: non-finite embedding");
  if (embedding.cols() != c.embed_dim) throw ContractError("latent_dist: embedding width");
  LatentVars out;
  out.mean = affine(p, "latent_mean", embedding);
  require_finite(out.mean, "latent_mean", 0);
  out.std = ad::shift(ad::softplus(affine(p, "latent_std", embedding)), c.latent_std_floor);
  require_finite(out.std, "latent_std", 0);
  return out;
}

Var reparam_sample(const LatentVars& dist, Var eps) {
  if (eps.cols() != dist.mean.cols()) throw ContractError("reparam_sample: eps width");
  return ad::add(dist.mean, ad::mul(dist.std, eps));
}

PredictiveVars decode(const BoundParams& p, Var x_tgt, Var z) {
  const ModelConfig& c = p.config();
  if (x_tgt.rows() == 0) throw DomainError("decode: no target inputs");
  if (x_tgt.cols() != c.x_dim || z.cols() != c.latent_dim) {
    throw ContractError("decode: input shape does not match model config");
  }
  if (!z.value().all_finite()) throw DomainError("decode: non-finite latent sample");
  PredictiveVars out;
  out.num_points = x_tgt.rows();
  out.num_samples = z.rows();
  // Row k·N + n of the first layer is [x_n, z_k]·W + b.
  Var h = ad::outer_add_rows(ad::matmul(x_tgt, p["decoder.0.weight_x"]),
                             ad::affine(z, p["decoder.0.weight_z"], p["decoder.0.bias"]));
  h = ad::relu(h);
  require_finite(h, "decoder", 0);
  for (std::size_t l = 1; l < c.decoder_layers; ++l) {
    h = ad::relu(affine(p, "decoder." + std::to_string(l), h));
    require_finite(h, "decoder", l);
  }
  out.mean = affine(p, "decoder_mean", h);
  require_finite(out.mean, "decoder_mean", 0);
  out.std = ad::shift(ad::scale(ad::softplus(affine(p, "decoder_std", h)), c.decoder_std_scale),
                      c.decoder_std_floor);
  require_finite(out.std, "decoder_std", 0);
  return out;
}

Var point_log_likelihoods(const PredictiveVars& pred, Var y_tgt) {
  const std::size_t k = pred.num_samples;
  const std::size_t n = pred.num_points;
  if (y_tgt.rows() != n || y_tgt.cols() != pred.mean.cols()) {
    throw ContractError("log_likelihood: target shape mismatch");
  }
  Tape& tape = *y_tgt.tape();
  // Tile targets to (K·N)×Dy to align with the decoder rows.
  Var tiled = y_tgt;
  if (k > 1) {
    Tensor rep(k * n, y_tgt.cols(), 0.0);
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < y_tgt.cols(); ++d) rep(s * n + i, d) = y_tgt.value()(i, d);
    if (y_tgt.requires_grad()) throw ContractError("log_likelihood: targets must be constant");
    tiled = tape.constant(std::move(rep));
  }
  Var lp = ad::gaussian_log_pdf(tiled, pred.mean, pred.std);  // (K·N)×Dy
  if (lp.cols() > 1) lp = ad::sum_cols(lp);
  return ad::reshape(lp, k, n);
}

Var sample_log_likelihoods(const PredictiveVars& pred, Var y_tgt) {
  return ad::sum_cols(point_log_likelihoods(pred, y_tgt));
}

TaskLatents encode_task(const BoundParams& p, Var x_ctx, Var y_ctx, Var x_tgt, Var y_tgt) {
  const std::size_t m = x_ctx.rows();
  if (m == 0) throw DomainError("encode_task: empty context");
  Var emb = encode_points(p, ad::concat_rows(x_ctx, x_tgt), ad::concat_rows(y_ctx, y_tgt));
  TaskLatents out;
  out.prior = latent_dist(p, pool_embeddings(ad::slice_rows(emb, 0, m)));
  out.posterior = latent_dist(p, pool_embeddings(emb));
  return out;
}

DiagGaussian to_diag(const LatentVars& v) {
  DiagGaussian g;
  const auto m = v.mean.value().values();
  const auto s = v.std.value().values();
  g.mean.assign(m.begin(), m.end());
  g.std.assign(s.begin(), s.end());
  return g;
}

PredictiveGaussian to_predictive(const PredictiveVars& v, std::size_t sample) {
  if (sample >= v.num_samples) throw ContractError("to_predictive: sample index out of range");
  return {v.mean.value().slice_rows(sample * v.num_points, v.num_points),
          v.std.value().slice_rows(sample * v.num_points, v.num_points)};
}

Tensor encode_set_value(const NPParams& params, const Tensor& xs, const Tensor& ys) {
  Tape tape;
  const BoundParams p = bind_constants(tape, params);
  return encode_set(p, tape.constant(xs), tape.constant(ys)).value();
}

DiagGaussian latent_dist_value(const NPParams& params, const Tensor& embedding) {
  Tape tape;
  const BoundParams p = bind_constants(tape, params);
  return to_diag(latent_dist(p, tape.constant(embedding)));
}

PredictiveGaussian decode_value(const NPParams& params, const Tensor& x_tgt,
                                std::span<const double> z) {
  Tape tape;
  const BoundParams p = bind_constants(tape, params);
  Tensor zt(1, z.size(), std::vector<double>(z.begin(), z.end()));
  return to_predictive(decode(p, tape.constant(x_tgt), tape.constant(std::move(zt))), 0);
}

}  // namespace rnp
