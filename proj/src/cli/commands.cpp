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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rnp/cli/app.hpp"
#include "rnp/errors.hpp"
#include "rnp/evalharness/sweeps.hpp"
#include "rnp/npmodel/checkpoint.hpp"
#include "rnp/version.hpp"

namespace rnp {

DatasetSpec dataset_from_config(const RunConfig& c) {
  DatasetSpec d;
  d.kind = parse_dataset_kind(c.get_string("dataset.kind"));
  d.corrupt_beta = c.get_float("dataset.corrupt_beta");
  d.gp_split.context_min = static_cast<int>(c.get_int("dataset.gp_context_min"));
  d.gp_split.context_max = static_cast<int>(c.get_int("dataset.gp_context_max"));
  d.gp_split.target_min = static_cast<int>(c.get_int("dataset.gp_target_min"));
  d.gp_split.total_max = static_cast<int>(c.get_int("dataset.gp_total_max"));
  d.lv_split.context_min = static_cast<int>(c.get_int("dataset.lv_context_min"));
  d.lv_split.context_max = static_cast<int>(c.get_int("dataset.lv_context_max"));
  d.lv_split.target_min = static_cast<int>(c.get_int("dataset.lv_target_min"));
  d.lv_split.total_max = static_cast<int>(c.get_int("dataset.lv_total_max"));
  try {
    d.gp_split.validate();
    d.lv_split.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(d.corrupt_beta >= 0.0 && d.corrupt_beta <= 1.0)) {
    throw ConfigError("dataset.corrupt_beta must lie in [0, 1]");
  }
  return d;
}

ModelConfig model_from_config(const RunConfig& c) {
  ModelConfig m;
  m.hidden = c.get_size("model.hidden");
  m.encoder_layers = c.get_size("model.encoder_layers");
  m.embed_dim = c.get_size("model.embed_dim");
  m.latent_dim = c.get_size("model.latent_dim");
  m.decoder_layers = c.get_size("model.decoder_layers");
  m.latent_std_floor = c.get_float("model.latent_std_floor");
  m.decoder_std_floor = c.get_float("model.decoder_std_floor");
  m.decoder_std_scale = c.get_float("model.decoder_std_scale");
  if (m.decoder_layers < 1) throw ConfigError("model.decoder_layers must be >= 1");
  m.validate();
  return m;
}

ObjectiveSpec objective_from_config(const RunConfig& c) {
  ObjectiveSpec o;
  o.kind = parse_objective_kind(c.get_string("objective.kind"));
  o.alpha = c.get_float("objective.alpha");
  o.num_samples = c.get_size("objective.K");
  o.alpha_eps = c.get_float("objective.alpha_eps");
  o.validate();
  return o;
}

TrainConfig train_config_from(const RunConfig& c) {
  TrainConfig t;
  t.dataset = dataset_from_config(c);
  t.model = model_from_config(c);
  t.objective = objective_from_config(c);
  const std::string schedule = c.get_string("objective.schedule");
  if (schedule == "linear") {
    t.alpha_schedule = AlphaSchedule::linear_anneal(c.get_float("objective.alpha_start"),
                                                    c.get_float("objective.alpha_end"),
                                                    c.get_size("objective.anneal_steps"));
  } else if (schedule != "constant") {
    throw ConfigError("objective.schedule must be constant or linear");
  }
  t.adam = {c.get_float("trainer.lr"), c.get_float("trainer.beta1"), c.get_float("trainer.beta2"),
            c.get_float("trainer.adam_eps")};
  t.steps = c.get_size("trainer.steps");
  t.batch_tasks = c.get_size("trainer.batch_tasks");
  t.train_pool = c.get_size("trainer.train_pool");
  t.val_tasks = c.get_size("trainer.val_tasks");
  t.checkpoint_interval = c.get_size("trainer.checkpoint_interval");
  t.eval_samples = c.get_size("eval.K");
  t.seed = static_cast<std::uint64_t>(c.get_int("seed"));
  t.out_dir = c.get_string("paths.out_dir");
  t.exp_id = "train/" + c.get_string("dataset.kind") + "/" + c.get_string("objective.kind");
  t.config_hash = c.hash();
  t.validate();
  return t;
}

std::vector<std::uint64_t> eval_seeds(const RunConfig& c) {
  const auto base = static_cast<std::uint64_t>(c.get_int("seed"));
  const std::size_t n = c.get_size("eval.num_seeds");
  if (n < 1) throw ConfigError("eval.num_seeds must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < n; ++i) seeds.push_back(base + i);
  return seeds;
}

namespace {

struct Invocation {
  std::string config_file;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_file, "flat key = value config file");
  for (const ConfigKey& k : config_registry()) {
    std::string help = k.help + " [default: " + (k.default_value.empty() ? "\"\"" : k.default_value) + "]";
    sub->add_option_function<std::string>(
        "--" + k.name, [&inv, name = k.name](const std::string& v) { inv.overrides[name] = v; },
        help);
  }
}

RunConfig resolve(const Invocation& inv) {
  RunConfig cfg;
  if (!inv.config_file.empty()) cfg.merge_file(inv.config_file);
  for (const auto& [k, v] : inv.overrides) cfg.set(k, v);
  return cfg;
}

std::filesystem::path out_dir(const RunConfig& c) { return c.get_string("paths.out_dir"); }

std::filesystem::path checkpoint_path(const RunConfig& c) {
  const std::string p = c.get_string("paths.checkpoint");
  return p.empty() ? out_dir(c) / "ckpt_final" : std::filesystem::path(p);
}

std::filesystem::path metrics_path(const RunConfig& c, const std::string& command) {
  const std::string p = c.get_string("paths.metrics");
  return p.empty() ? out_dir(c) / (command + ".csv") : std::filesystem::path(p);
}

nlohmann::json output_meta(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"config_hash", c.hash()},
          {"seed", c.get_int("seed")},
          {"code_version", kCodeVersion}};
}

std::string objective_label(const RunConfig& c) { return c.get_string("objective.kind"); }

// Trained order of the checkpoint: the end of an annealing schedule if any.
double objective_alpha(const RunConfig& c) {
  const double alpha = c.get_string("objective.schedule") == "linear"
                           ? c.get_float("objective.alpha_end")
                           : c.get_float("objective.alpha");
  return reported_alpha(parse_objective_kind(c.get_string("objective.kind")), alpha);
}

void emit(const RunConfig& c, const std::string& command, const std::vector<MetricsRecord>& rows) {
  const std::filesystem::path path = metrics_path(c, command);
  append_metrics_csv(path, rows, output_meta(c, command));
  std::cout << metrics_csv_header() << '\n';
  for (const MetricsRecord& r : rows) std::cout << to_csv_row(r) << '\n';
  std::cout << "wrote " << rows.size() << " rows to " << path.string() << '\n';
}

// Tasks from a JSONL file, or the test split of a dataset kind.
std::vector<Task> eval_tasks(const RunConfig& c, const std::string& data, std::uint64_t seed,
                             std::string& dataset_label) {
  if (!data.empty() && std::filesystem::exists(data)) {
    dataset_label = std::filesystem::path(data).stem().string();
    return read_tasks_jsonl(data);
  }
  DatasetSpec spec = dataset_from_config(c);
  if (!data.empty()) spec.kind = parse_dataset_kind(data);
  dataset_label = std::string(to_string(spec.kind));
  return generate_tasks(spec, seed, "test", c.get_size("eval.n_tasks"));
}

int cmd_train(const RunConfig& c) {
  const TrainConfig t = train_config_from(c);
  const TrainResult r = train(t, [&](std::uint64_t step, double loss) {
    if ((step + 1) % 1000 == 0) {
      std::cerr << "step " << (step + 1) << " loss " << format_double(loss) << '\n';
    }
  });
  std::cout << "checkpoint " << r.final_checkpoint.string() << '\n';
  std::cout << metrics_csv_header() << '\n';
  for (const MetricsRecord& m : r.metrics) std::cout << to_csv_row(m) << '\n';
  return 0;
}

int cmd_eval(const RunConfig& c, const std::string& ckpt, const std::string& data,
             std::optional<std::size_t> k) {
  const NPParams params = load_checkpoint(ckpt.empty() ? checkpoint_path(c) : std::filesystem::path(ckpt)).params;
  const std::size_t samples = k.value_or(c.get_size("eval.K"));
  std::vector<MetricsRecord> rows;
  for (std::uint64_t seed : eval_seeds(c)) {
    std::string label;
    const std::vector<Task> tasks =
        eval_tasks(c, data.empty() ? c.get_string("paths.data") : data, seed, label);
    const EvalLabels labels{"eval", label, objective_label(c), objective_alpha(c)};
    for (EvalSplit s : {EvalSplit::Context, EvalSplit::Target}) {
      rows.push_back(eval_marginal_ll(params, tasks, samples, s, seed, labels));
    }
  }
  emit(c, "eval", rows);
  return 0;
}

int cmd_sweep(const RunConfig& c, const std::string& kind, const std::string& grid_text) {
  SweepConfig s;
  s.kind = parse_sweep_kind(kind);
  s.grid = parse_float_list(grid_text.empty() ? c.get_string("eval.grid") : grid_text);
  if (s.grid.empty()) {
    s.grid = s.kind == SweepKind::K          ? default_k_grid()
             : s.kind == SweepKind::NContext ? default_ncontext_grid()
                                             : alpha_grid(false);
  }
  s.restrict_alpha = c.get_bool("eval.restrict_alpha");
  s.checkpoint = checkpoint_path(c);
  s.checkpoint_template = c.get_string("paths.checkpoint_template");
  if (s.kind == SweepKind::Alpha && s.checkpoint_template.empty()) {
    throw ConfigError("alpha sweeps need paths.checkpoint_template");
  }
  s.dataset = dataset_from_config(c);
  s.n_tasks = c.get_size("eval.n_tasks");
  s.num_samples = c.get_size("eval.K");
  s.ncontext_targets = c.get_size("eval.ncontext_targets");
  s.seeds = eval_seeds(c);
  s.exp_id = "sweep/" + kind;
  s.objective = objective_label(c);
  s.alpha = objective_alpha(c);
  emit(c, "sweep", run_sweep(s));
  return 0;
}

int cmd_misspec(const RunConfig& c, const std::string& protocol) {
  MisspecConfig m;
  m.protocol = parse_misspec_protocol(protocol);
  m.checkpoint = checkpoint_path(c);
  m.dataset = dataset_from_config(c);
  m.beta = c.get_float("eval.beta");
  m.hare_lynx_csv = c.get_string("paths.hare_lynx");
  m.hare_lynx_context_min = c.get_size("eval.hare_lynx_context_min");
  m.hare_lynx_context_max = c.get_size("eval.hare_lynx_context_max");
  m.n_tasks = c.get_size("eval.n_tasks");
  m.num_samples = c.get_size("eval.K");
  m.seeds = eval_seeds(c);
  m.exp_id = "misspec";
  m.objective = objective_label(c);
  m.alpha = objective_alpha(c);
  emit(c, "misspec", run_misspec_protocol(m));
  return 0;
}

int report(const CheckOutcome& out, const std::string& name) {
  for (const std::string& l : out.lines) std::cout << l << '\n';
  if (!out.ok) {
    std::cout << "FAIL " << name << ": " << out.reason << '\n';
    return 1;
  }
  std::cout << "PASS " << name << '\n';
  return 0;
}

int cmd_dump(const RunConfig& c, const std::string& ckpt, const std::string& data) {
  const NPParams params = load_checkpoint(ckpt.empty() ? checkpoint_path(c) : std::filesystem::path(ckpt)).params;
  const auto seed = static_cast<std::uint64_t>(c.get_int("seed"));
  std::string label;
  const std::vector<Task> tasks =
      eval_tasks(c, data.empty() ? c.get_string("paths.data") : data, seed, label);
  const std::size_t index = c.get_size("eval.dump_task");
  if (index >= tasks.size()) throw ConfigError("eval.dump_task out of range");
  const auto rows = prediction_dump(params, tasks[index], c.get_size("eval.K"),
                                    c.get_size("eval.dump_points"), c.get_float("eval.dump_x_lo"),
                                    c.get_float("eval.dump_x_hi"), seed);
  const std::string p = c.get_string("paths.dump");
  const std::filesystem::path path = p.empty() ? out_dir(c) / "predictions.csv" : std::filesystem::path(p);
  write_prediction_dump(path, rows);
  std::ofstream side(path.string() + ".meta.json");
  side << output_meta(c, "dump").dump(2) << '\n';
  std::cout << "wrote " << rows.size() << " rows to " << path.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Rényi-objective neural processes"};
  app.set_version_flag("--version", kCodeVersion);
  app.require_subcommand(1);
  Invocation inv;
  std::string ckpt, data, kind, grid, protocol;
  std::optional<std::size_t> k;

  const auto make = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_config_options(sub, inv);
    return sub;
  };
  CLI::App* train_cmd = make("train", "train a model; writes ckpt_final and metrics.csv");
  CLI::App* eval_cmd = make("eval", "per-point log-likelihood on context and target splits");
  eval_cmd->add_option("--ckpt", ckpt, "checkpoint (default paths.checkpoint)");
  eval_cmd->add_option("--data", data, "JSONL task file or dataset kind");
  eval_cmd->add_option("--K", k, "latent samples (default eval.K)");
  CLI::App* sweep_cmd = make("sweep", "alpha, K or context-size sweep");
  sweep_cmd->add_option("--kind", kind, "alpha | k | ncontext")->required();
  sweep_cmd->add_option("--grid", grid, "comma-separated grid (default eval.grid)");
  CLI::App* misspec_cmd = make("misspec", "noisy-context or LV to Hare-Lynx protocol");
  misspec_cmd->add_option("--protocol", protocol, "noisy | lv")->required();
  CLI::App* grad_cmd = make("gradcheck", "autodiff vs explicit weights and finite differences");
  CLI::App* oracle_cmd = make("oracle", "closed-form Gaussian Rényi oracles");
  CLI::App* dump_cmd = make("dump", "prediction CSV on a dense grid");
  dump_cmd->add_option("--ckpt", ckpt, "checkpoint (default paths.checkpoint)");
  dump_cmd->add_option("--data", data, "JSONL task file or dataset kind");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    const RunConfig cfg = resolve(inv);
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    if (train_cmd->parsed()) return cmd_train(cfg);
    if (eval_cmd->parsed()) return cmd_eval(cfg, ckpt, data, k);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, kind, grid);
    if (misspec_cmd->parsed()) return cmd_misspec(cfg, protocol);
    if (grad_cmd->parsed()) return report(run_gradcheck_suite(seed), "gradcheck");
    if (oracle_cmd->parsed()) return report(run_oracle_suite(seed), "oracle");
    if (dump_cmd->parsed()) return cmd_dump(cfg, ckpt, data);
  } catch (const ConfigError& e) {
    std::cout << "ERROR config: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cout << "ERROR " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cout << "ERROR internal: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace rnp
