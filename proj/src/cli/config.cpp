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

#include "rnp/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/numkit/rng.hpp"

namespace rnp {

const std::vector<ConfigKey>& config_registry() {
  static const std::vector<ConfigKey> keys = {
      {"seed", KeyType::Int, "0", "root seed for data, initialisation, sampling and evaluation"},
      {"dataset.kind", KeyType::String, "rbf", "rbf | matern52 | periodic | lv"},
      {"dataset.corrupt_beta", KeyType::Float, "0", "context corruption weight in [0, 1]"},
      {"dataset.gp_context_min", KeyType::Int, "3", "GP tasks: minimum context size"},
      {"dataset.gp_context_max", KeyType::Int, "47", "GP tasks: maximum context size"},
      {"dataset.gp_target_min", KeyType::Int, "3", "GP tasks: minimum target size"},
      {"dataset.gp_total_max", KeyType::Int, "50", "GP tasks: maximum context + target size"},
      {"dataset.lv_context_min", KeyType::Int, "15", "LV tasks: minimum context size"},
      {"dataset.lv_context_max", KeyType::Int, "85", "LV tasks: maximum context size"},
      {"dataset.lv_target_min", KeyType::Int, "15", "LV tasks: minimum target size"},
      {"dataset.lv_total_max", KeyType::Int, "100", "LV tasks: maximum context + target size"},
      {"model.hidden", KeyType::Int, "64", "hidden width of every MLP layer"},
      {"model.encoder_layers", KeyType::Int, "2", "hidden layers of the point encoder"},
      {"model.embed_dim", KeyType::Int, "64", "set embedding width"},
      {"model.latent_dim", KeyType::Int, "32", "latent dimension Dz"},
      {"model.decoder_layers", KeyType::Int, "2", "hidden layers of the decoder trunk"},
      {"model.latent_std_floor", KeyType::Float, "0.001", "latent std = floor + softplus(raw)"},
      {"model.decoder_std_floor", KeyType::Float, "0.1", "decoder std = floor + scale*softplus(raw)"},
      {"model.decoder_std_scale", KeyType::Float, "0.9", "decoder std softplus scale"},
      {"objective.kind", KeyType::String, "rnp_vi",
       "vi | ml_expected | ml_marginal | rnp_vi | rnp_ml_task | rnp_ml_literal"},
      {"objective.alpha", KeyType::Float, "0.7", "Renyi order alpha >= 0"},
      {"objective.K", KeyType::Int, "32", "latent samples per task during training"},
      {"objective.alpha_eps", KeyType::Float, "0.001", "distance from 1 that selects the limit formula"},
      {"objective.schedule", KeyType::String, "constant", "constant | linear (alpha annealing)"},
      {"objective.alpha_start", KeyType::Float, "0.999", "linear schedule: initial alpha"},
      {"objective.alpha_end", KeyType::Float, "0.7", "linear schedule: final alpha"},
      {"objective.anneal_steps", KeyType::Int, "1000", "linear schedule: steps to reach alpha_end"},
      {"trainer.steps", KeyType::Int, "20000", "optimizer steps"},
      {"trainer.batch_tasks", KeyType::Int, "16", "tasks per minibatch"},
      {"trainer.train_pool", KeyType::Int, "10000", "training functions; 0 draws fresh tasks"},
      {"trainer.val_tasks", KeyType::Int, "64", "validation tasks per checkpoint"},
      {"trainer.checkpoint_interval", KeyType::Int, "0", "steps between checkpoints; 0 = final only"},
      {"trainer.lr", KeyType::Float, "0.0005", "Adam learning rate"},
      {"trainer.beta1", KeyType::Float, "0.9", "Adam first-moment decay"},
      {"trainer.beta2", KeyType::Float, "0.999", "Adam second-moment decay"},
      {"trainer.adam_eps", KeyType::Float, "1e-08", "Adam denominator offset"},
      {"eval.K", KeyType::Int, "50", "latent samples per task during evaluation"},
      {"eval.n_tasks", KeyType::Int, "64", "evaluation tasks per seed"},
      {"eval.num_seeds", KeyType::Int, "5", "evaluation seeds seed, seed+1, ..."},
      {"eval.grid", KeyType::String, "", "sweep grid (comma list); empty = default for the kind"},
      {"eval.restrict_alpha", KeyType::Bool, "false", "alpha sweeps: keep only 0 < alpha < 1"},
      {"eval.ncontext_targets", KeyType::Int, "50", "ncontext sweeps: targets per task"},
      {"eval.beta", KeyType::Float, "0.3", "noisy-context protocol corruption weight"},
      {"eval.hare_lynx_context_min", KeyType::Int, "15", "Hare-Lynx splits: minimum context size"},
      {"eval.hare_lynx_context_max", KeyType::Int, "45", "Hare-Lynx splits: maximum context size"},
      {"eval.dump_points", KeyType::Int, "200", "prediction dump: grid size"},
      {"eval.dump_x_lo", KeyType::Float, "-2", "prediction dump: grid start"},
      {"eval.dump_x_hi", KeyType::Float, "2", "prediction dump: grid end"},
      {"eval.dump_task", KeyType::Int, "0", "prediction dump: index of the test task"},
      {"paths.out_dir", KeyType::String, "runs/default", "directory for checkpoints and CSV output"},
      {"paths.checkpoint", KeyType::String, "", "checkpoint to evaluate; empty = <out_dir>/ckpt_final"},
      {"paths.checkpoint_template", KeyType::String, "",
       "alpha sweeps: checkpoint path containing {alpha}"},
      {"paths.data", KeyType::String, "", "evaluation tasks: JSONL file or dataset kind; empty = dataset.kind"},
      {"paths.hare_lynx", KeyType::String, "data/lynx.csv", "Hare-Lynx CSV (year,lynx[,hare])"},
      {"paths.metrics", KeyType::String, "", "metrics CSV; empty = <out_dir>/<command>.csv"},
      {"paths.dump", KeyType::String, "", "prediction dump CSV; empty = <out_dir>/predictions.csv"},
  };
  return keys;
}

const ConfigKey* find_config_key(std::string_view name) {
  for (const ConfigKey& k : config_registry())
    if (k.name == name) return &k;
  return nullptr;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end && !s.empty();
}

bool parse_float(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end && !s.empty() && std::isfinite(out);
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is{std::string(s)};
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  return out;
}

std::string canonicalize(const ConfigKey& key, std::string_view value) {
  const std::string v = trim(value);
  const auto fail = [&](const char* what) -> std::string {
    throw ConfigError("key '" + key.name + "': expected " + what + ", got '" + v + "'");
  };
  switch (key.type) {
    case KeyType::Int: {
      std::int64_t i = 0;
      if (!parse_int(v, i)) fail("an integer");
      return std::to_string(i);
    }
    case KeyType::Float: {
      double d = 0.0;
      if (!parse_float(v, d)) fail("a finite number");
      return format17(d);
    }
    case KeyType::Bool:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      return fail("true or false");
    case KeyType::UintList:
    case KeyType::FloatList: {
      if (v.empty()) return v;
      std::string out;
      for (const std::string& item : split_list(v)) {
        double d = 0.0;
        if (!parse_float(item, d)) fail("a comma-separated list of numbers");
        if (!out.empty()) out += ',';
        out += format17(d);
      }
      return out;
    }
    case KeyType::String:
      return v;
  }
  return v;
}

}  // namespace

std::vector<double> parse_float_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split_list(text)) {
    double d = 0.0;
    if (!parse_float(item, d)) throw ConfigError("expected a list of numbers, got '" + item + "'");
    out.push_back(d);
  }
  return out;
}

RunConfig::RunConfig() {
  for (const ConfigKey& k : config_registry()) values_[k.name] = canonicalize(k, k.default_value);
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const ConfigKey* k = find_config_key(key);
  if (k == nullptr) throw ConfigError("unknown config key '" + std::string(key) + "'");
  values_[k->name] = canonicalize(*k, value);
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

void RunConfig::merge_text(std::string_view text, std::string_view origin) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (!quoted && (line[i] == '#' || line[i] == ';')) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) throw ConfigError(where + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    try {
      set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

const std::string& RunConfig::raw(std::string_view key) const {
  const auto it = values_.find(std::string(key));
  if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

std::int64_t RunConfig::get_int(std::string_view key) const {
  std::int64_t v = 0;
  if (!parse_int(raw(key), v)) throw ConfigError("key '" + std::string(key) + "' is not an integer");
  return v;
}

std::size_t RunConfig::get_size(std::string_view key) const {
  const std::int64_t v = get_int(key);
  if (v < 0) throw ConfigError("key '" + std::string(key) + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

double RunConfig::get_float(std::string_view key) const {
  double v = 0.0;
  if (!parse_float(raw(key), v)) throw ConfigError("key '" + std::string(key) + "' is not a number");
  return v;
}

bool RunConfig::get_bool(std::string_view key) const { return raw(key) == "true"; }

std::vector<std::uint64_t> RunConfig::get_uint_list(std::string_view key) const {
  std::vector<std::uint64_t> out;
  for (double d : get_float_list(key)) {
    if (d < 0 || d != std::floor(d)) {
      throw ConfigError("key '" + std::string(key) + "' must list non-negative integers");
    }
    out.push_back(static_cast<std::uint64_t>(d));
  }
  return out;
}

std::vector<double> RunConfig::get_float_list(std::string_view key) const {
  return parse_float_list(raw(key));
}

bool is_output_location(std::string_view key) {
  return key == "paths.out_dir" || key == "paths.metrics" || key == "paths.dump";
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string RunConfig::hash() const {
  std::string text;
  for (const auto& [k, v] : values_) {
    if (!is_output_location(k)) text += k + " = " + v + "\n";
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

}  // namespace rnp
