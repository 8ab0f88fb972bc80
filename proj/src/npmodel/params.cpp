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

#include "rnp/npmodel/params.hpp"

#include <cmath>

#include "rnp/errors.hpp"
#include "rnp/numkit/rng.hpp"

namespace rnp {

void ModelConfig::validate() const {
  if (x_dim == 0 || y_dim == 0 || hidden == 0 || embed_dim == 0 || latent_dim == 0) {
    throw ConfigError("ModelConfig: dimensions must be positive");
  }
  if (!(latent_std_floor > 0.0)) throw ConfigError("ModelConfig: latent_std_floor must be > 0");
  if (!(decoder_std_floor > 0.0)) throw ConfigError("ModelConfig: decoder_std_floor must be > 0");
  if (!(decoder_std_scale > 0.0)) throw ConfigError("ModelConfig: decoder_std_scale must be > 0");
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"x_dim", c.x_dim},
          {"y_dim", c.y_dim},
          {"hidden", c.hidden},
          {"encoder_layers", c.encoder_layers},
          {"embed_dim", c.embed_dim},
          {"latent_dim", c.latent_dim},
          {"decoder_layers", c.decoder_layers},
          {"latent_std_floor", c.latent_std_floor},
          {"decoder_std_floor", c.decoder_std_floor},
          {"decoder_std_scale", c.decoder_std_scale}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.x_dim = j.at("x_dim").get<std::size_t>();
  c.y_dim = j.at("y_dim").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.encoder_layers = j.at("encoder_layers").get<std::size_t>();
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.latent_dim = j.at("latent_dim").get<std::size_t>();
  c.decoder_layers = j.at("decoder_layers").get<std::size_t>();
  c.latent_std_floor = j.at("latent_std_floor").get<double>();
  c.decoder_std_floor = j.at("decoder_std_floor").get<double>();
  c.decoder_std_scale = j.at("decoder_std_scale").get<double>();
  c.validate();
  return c;
}

NPParams::NPParams(ModelConfig config, std::vector<std::string> names, std::vector<Tensor> values)
    : config_(config), names_(std::move(names)), values_(std::move(values)) {
  if (names_.size() != values_.size()) throw ContractError("NPParams: names/values mismatch");
}

std::size_t NPParams::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw ContractError("NPParams: no parameter named '" + std::string(name) + "'");
}

const Tensor& NPParams::at(std::string_view name) const { return values_[index_of(name)]; }

Tensor& NPParams::at(std::string_view name) { return values_[index_of(name)]; }

std::size_t NPParams::num_scalars() const {
  std::size_t n = 0;
  for (const Tensor& t : values_) n += t.size();
  return n;
}

std::vector<std::pair<std::string, std::array<std::size_t, 2>>> param_layout(
    const ModelConfig& c) {
  std::vector<std::pair<std::string, std::array<std::size_t, 2>>> layout;
  const auto linear = [&layout](const std::string& prefix, std::size_t in, std::size_t out) {
    layout.push_back({prefix + ".weight", {in, out}});
    layout.push_back({prefix + ".bias", {1, out}});
  };
  std::size_t in = c.x_dim + c.y_dim;
  for (std::size_t l = 0; l < c.encoder_layers; ++l) {
    linear("encoder." + std::to_string(l), in, c.hidden);
    in = c.hidden;
  }
  linear("encoder.out", in, c.embed_dim);
  linear("latent_mean", c.embed_dim, c.latent_dim);
  linear("latent_std", c.embed_dim, c.latent_dim);
  // First decoder layer acts on concat(x, z); stored as its two column blocks.
  layout.push_back({"decoder.0.weight_x", {c.x_dim, c.hidden}});
  layout.push_back({"decoder.0.weight_z", {c.latent_dim, c.hidden}});
  layout.push_back({"decoder.0.bias", {1, c.hidden}});
  for (std::size_t l = 1; l < c.decoder_layers; ++l) {
    linear("decoder." + std::to_string(l), c.hidden, c.hidden);
  }
  linear("decoder_mean", c.hidden, c.y_dim);
  linear("decoder_std", c.hidden, c.y_dim);
  return layout;
}

NPParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (cfg.decoder_layers < 1) throw ConfigError("ModelConfig: decoder needs >= 1 hidden layer");
  std::vector<std::string> names;
  std::vector<Tensor> values;
  const auto layout = param_layout(cfg);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& [name, shape] = layout[i];
    Tensor t(shape[0], shape[1], 0.0);
    if (name.ends_with(".bias")) {
      // zero
    } else {
      std::size_t fan_in = shape[0];
      if (name == "decoder.0.weight_x" || name == "decoder.0.weight_z") {
        fan_in = cfg.x_dim + cfg.latent_dim;
      }
      const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
      RngStream rng(seed, "init/" + name, i);
      for (double& v : t.values()) v = rng.uniform(-bound, bound);
    }
    names.push_back(name);
    values.push_back(std::move(t));
  }
  return NPParams(cfg, std::move(names), std::move(values));
}

}  // namespace rnp
