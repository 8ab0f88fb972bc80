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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rnp/numkit/tensor.hpp"

namespace rnp {

struct ModelConfig {
  std::size_t x_dim = 1;
  std::size_t y_dim = 1;
  std::size_t hidden = 64;
  // Hidden ReLU layers of the point encoder h(x, y); an affine output layer
  // to embed_dim follows.
  std::size_t encoder_layers = 2;
  std::size_t embed_dim = 64;
  std::size_t latent_dim = 32;
  // Hidden ReLU layers of the decoder trunk on (x, z).
  std::size_t decoder_layers = 2;
  double latent_std_floor = 1e-3;
  double decoder_std_floor = 0.1;
  double decoder_std_scale = 0.9;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);

// All trainable weights, as an ordered list of named matrices. The point
// encoder and latent heads (φ) serve both the prior q(z|C) and the posterior
// q(z|C,T); the decoder trunk and heads form θ.
class NPParams {
 public:
  NPParams() = default;
  NPParams(ModelConfig config, std::vector<std::string> names, std::vector<Tensor> values);

  const ModelConfig& config() const { return config_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Tensor>& values() const { return values_; }
  std::vector<Tensor>& values() { return values_; }

  const Tensor& at(std::string_view name) const;
  Tensor& at(std::string_view name);
  std::size_t index_of(std::string_view name) const;
  std::size_t num_scalars() const;

  friend bool operator==(const NPParams&, const NPParams&) = default;

 private:
  ModelConfig config_;
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
};

// Layer names and shapes implied by a config, in storage order.
std::vector<std::pair<std::string, std::array<std::size_t, 2>>> param_layout(
    const ModelConfig& cfg);

// Weights ~ U(-√(6/fan_in), √(6/fan_in)), biases zero; keyed by seed.
NPParams init_params(const ModelConfig& cfg, std::uint64_t seed);

}  // namespace rnp
