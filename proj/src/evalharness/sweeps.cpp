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

#include "rnp/evalharness/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/npmodel/checkpoint.hpp"
#include "rnp/npmodel/model.hpp"
#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/hare_lynx.hpp"

namespace rnp {

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Alpha: return "alpha";
    case SweepKind::K: return "k";
    case SweepKind::NContext: return "ncontext";
  }
  return "?";
}

SweepKind parse_sweep_kind(std::string_view name) {
  if (name == "alpha") return SweepKind::Alpha;
  if (name == "k") return SweepKind::K;
  if (name == "ncontext") return SweepKind::NContext;
  throw ConfigError("unknown sweep kind '" + std::string(name) + "'");
}

std::vector<double> default_ncontext_grid() {
  std::vector<double> g;
  for (int m = 5; m <= 95; m += 10) g.push_back(m);
  return g;
}

std::vector<double> default_k_grid() { return {1, 8, 16, 32, 50}; }

std::vector<double> alpha_grid(bool restricted) {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 10.0);
  return restricted ? restrict_alpha_grid(g) : g;
}

std::vector<double> restrict_alpha_grid(const std::vector<double>& grid) {
  std::vector<double> out;
  for (double a : grid)
    if (a > 0.0 && a < 1.0) out.push_back(a);
  return out;
}

std::filesystem::path alpha_checkpoint_path(const std::string& tmpl, double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  std::string s = tmpl;
  const auto pos = s.find("{alpha}");
  if (pos == std::string::npos) throw ConfigError("checkpoint template lacks {alpha}: " + tmpl);
  s.replace(pos, 7, buf);
  return s;
}

namespace {

std::string grid_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw ConfigError(std::string(what) + " grid values must be positive integers, got " +
                      grid_label(v));
  }
  return static_cast<std::size_t>(v);
}

NPParams load_params(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::exists(path)) {
    throw IoError(what + ": checkpoint not found: " + path.string());
  }
  return load_checkpoint(path).params;
}

void eval_both(const NPParams& params, std::span<const Task> tasks, std::size_t k,
               std::uint64_t seed, const EvalLabels& labels, std::vector<MetricsRecord>& out) {
  for (EvalSplit s : {EvalSplit::Context, EvalSplit::Target}) {
    out.push_back(eval_marginal_ll(params, tasks, k, s, seed, labels));
  }
}

DatasetSpec with_fixed_context(DatasetSpec spec, std::size_t m, std::size_t n) {
  const int mi = static_cast<int>(m);
  const int ni = static_cast<int>(n);
  if (spec.kind == DatasetKind::LotkaVolterra) {
    spec.lv_split = {mi, mi, ni, mi + ni};
  } else {
    spec.gp_split.context_min = mi;
    spec.gp_split.context_max = mi;
    spec.gp_split.target_min = ni;
    spec.gp_split.total_max = mi + ni;
  }
  return spec;
}

}  // namespace

std::vector<MetricsRecord> run_sweep(const SweepConfig& cfg) {
  std::vector<double> grid = cfg.grid;
  if (cfg.kind == SweepKind::Alpha && cfg.restrict_alpha) grid = restrict_alpha_grid(grid);
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  if (cfg.seeds.empty()) throw ConfigError("sweep: no seeds");
  const std::string dataset = std::string(to_string(cfg.dataset.kind));
  std::vector<MetricsRecord> out;
  NPParams shared;
  if (cfg.kind != SweepKind::Alpha) shared = load_params(cfg.checkpoint, "sweep " + to_string(cfg.kind));

  for (double g : grid) {
    const std::string label = to_string(cfg.kind) + "=" + grid_label(g);
    EvalLabels labels{cfg.exp_id + "/" + label, dataset, cfg.objective, cfg.alpha};
    NPParams local;
    const NPParams* params = &shared;
    std::size_t k = cfg.num_samples;
    DatasetSpec spec = cfg.dataset;
    switch (cfg.kind) {
      case SweepKind::Alpha:
        local = load_params(alpha_checkpoint_path(cfg.checkpoint_template, g), "sweep " + label);
        params = &local;
        labels.alpha = g;
        break;
      case SweepKind::K:
        k = as_count(g, "K");
        break;
      case SweepKind::NContext:
        spec = with_fixed_context(spec, as_count(g, "ncontext"), cfg.ncontext_targets);
        break;
    }
    for (std::uint64_t seed : cfg.seeds) {
      const std::vector<Task> tasks = generate_tasks(spec, seed, "test", cfg.n_tasks);
      eval_both(*params, tasks, k, seed, labels, out);
    }
  }
  return out;
}

std::string to_string(MisspecProtocol p) {
  return p == MisspecProtocol::NoisyContext ? "noisy" : "lv";
}

MisspecProtocol parse_misspec_protocol(std::string_view name) {
  if (name == "noisy") return MisspecProtocol::NoisyContext;
  if (name == "lv") return MisspecProtocol::LvToHareLynx;
  throw ConfigError("unknown misspecification protocol '" + std::string(name) + "'");
}

std::vector<MetricsRecord> run_misspec_protocol(const MisspecConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("misspec: no seeds");
  const NPParams params = load_params(cfg.checkpoint, "misspec " + to_string(cfg.protocol));
  std::vector<MetricsRecord> out;
  const std::string dataset = std::string(to_string(cfg.dataset.kind));

  if (cfg.protocol == MisspecProtocol::NoisyContext) {
    for (double beta : {0.0, cfg.beta}) {
      DatasetSpec spec = cfg.dataset;
      spec.corrupt_beta = beta;
      const EvalLabels labels{cfg.exp_id + "/noisy/beta=" + grid_label(beta), dataset,
                              cfg.objective, cfg.alpha};
      for (std::uint64_t seed : cfg.seeds) {
        const std::vector<Task> tasks = generate_tasks(spec, seed, "test", cfg.n_tasks);
        out.push_back(eval_marginal_ll(params, tasks, cfg.num_samples, EvalSplit::Target, seed,
                                       labels));
      }
    }
    return out;
  }

  if (cfg.dataset.kind != DatasetKind::LotkaVolterra) {
    throw ConfigError("misspec lv: dataset.kind must be lv");
  }
  if (!std::filesystem::exists(cfg.hare_lynx_csv)) {
    throw IngestionError("Hare-Lynx file not found: " + cfg.hare_lynx_csv.string());
  }
  const HareLynxSeries series = read_hare_lynx(cfg.hare_lynx_csv);
  for (std::uint64_t seed : cfg.seeds) {
    const std::vector<Task> lv = generate_tasks(cfg.dataset, seed, "test", cfg.n_tasks);
    eval_both(params, lv, cfg.num_samples, seed,
              {cfg.exp_id + "/lv/simulated", "lv", cfg.objective, cfg.alpha}, out);
    const std::vector<Task> hl = hare_lynx_tasks(series, cfg.n_tasks, cfg.hare_lynx_context_min,
                                                 cfg.hare_lynx_context_max, seed);
    eval_both(params, hl, cfg.num_samples, seed,
              {cfg.exp_id + "/lv/hare_lynx", "hare_lynx", cfg.objective, cfg.alpha}, out);
  }
  return out;
}

std::vector<PredictionRow> prediction_dump(const NPParams& params, const Task& task,
                                           std::size_t num_samples, std::size_t grid_points,
                                           double x_lo, double x_hi, std::uint64_t seed) {
  task.validate();
  if (task.x_dim() != 1 || task.y_dim() != 1) {
    throw ContractError("prediction dump: one-dimensional tasks only");
  }
  if (grid_points < 2 || !(x_hi > x_lo)) throw DomainError("prediction dump: invalid grid");
  if (num_samples < 1) throw DomainError("prediction dump: K must be >= 1");
  Tensor xs(grid_points, 1, 0.0);
  for (std::size_t i = 0; i < grid_points; ++i) {
    xs(i, 0) = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
  }
  Tape tape;
  const BoundParams p = bind_constants(tape, params);
  const LatentVars prior =
      latent_dist(p, encode_set(p, tape.constant(task.x_ctx), tape.constant(task.y_ctx)));
  RngStream rng(seed, "dump");
  Var z = reparam_sample(prior, tape.constant(rng.normal_tensor(num_samples, params.config().latent_dim)));
  const PredictiveVars pred = decode(p, tape.constant(xs), z);
  std::vector<PredictionRow> rows(grid_points);
  const double inv_k = 1.0 / static_cast<double>(num_samples);
  for (std::size_t i = 0; i < grid_points; ++i) {
    double m = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < num_samples; ++k) {
      m += pred.mean.value()(k * grid_points + i, 0);
      s += pred.std.value()(k * grid_points + i, 0);
    }
    rows[i] = {xs(i, 0), m * inv_k, s * inv_k, false};
  }
  for (std::size_t c = 0; c < task.num_context(); ++c) {
    rows.push_back({task.x_ctx(c, 0), task.y_ctx(c, 0), 0.0, true});
  }
  return rows;
}

void write_prediction_dump(const std::filesystem::path& path, std::span<const PredictionRow> rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write prediction dump: " + path.string());
  out << "x,mean,std,is_context\n";
  for (const PredictionRow& r : rows) {
    out << format_double(r.x) << ',' << format_double(r.mean) << ',' << format_double(r.std) << ','
        << (r.is_context ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed writing prediction dump: " + path.string());
}

std::vector<PredictionRow> read_prediction_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prediction dump: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,mean,std,is_context") {
    throw IngestionError(path.string() + ": unexpected prediction dump header");
  }
  std::vector<PredictionRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string a, b, c, d;
    if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, c, ',') ||
        !std::getline(is, d) || (d != "0" && d != "1")) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    try {
      rows.push_back({std::stod(a), std::stod(b), std::stod(c), d == "1"});
    } catch (const std::exception&) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) + ": non-numeric field");
    }
  }
  return rows;
}

}  // namespace rnp
