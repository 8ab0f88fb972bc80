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

#include "rnp/evalharness/metrics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/numkit/logspace.hpp"
#include "rnp/numkit/ops.hpp"
#include "rnp/npmodel/model.hpp"
#include "rnp/numkit/rng.hpp"

namespace rnp {

std::string to_string(EvalSplit split) {
  return split == EvalSplit::Context ? "context" : "target";
}

std::string metrics_csv_header() {
  return "exp_id,dataset,objective,alpha,K,split,ll_mean,ll_std,n_tasks,seed,wall_seconds";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos) {
    throw ContractError("metrics field must not contain separators: '" + s + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_csv_row(const MetricsRecord& r) {
  check_field(r.exp_id);
  check_field(r.dataset);
  check_field(r.objective);
  std::ostringstream os;
  os << r.exp_id << ',' << r.dataset << ',' << r.objective << ',' << format_double(r.alpha) << ','
     << r.num_samples << ',' << to_string(r.split) << ',' << format_double(r.ll_mean) << ','
     << format_double(r.ll_std) << ',' << r.n_tasks << ',' << r.seed << ','
     << format_double(r.wall_seconds);
  return os.str();
}

void append_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRecord> rows,
                        const nlohmann::json& meta) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open metrics file: " + path.string());
  if (fresh) out << metrics_csv_header() << '\n';
  for (const MetricsRecord& r : rows) out << to_csv_row(r) << '\n';
  if (!out) throw IoError("failed writing metrics file: " + path.string());
  std::ofstream side(path.string() + ".meta.json", std::ios::trunc);
  if (!side) throw IoError("cannot write metrics sidecar for " + path.string());
  side << meta.dump(2) << '\n';
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != metrics_csv_header()) {
    throw IngestionError(path.string() + ": missing or unexpected metrics header");
  }
  std::vector<MetricsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) + ": expected 11 fields");
    }
    try {
      MetricsRecord r;
      r.exp_id = f[0];
      r.dataset = f[1];
      r.objective = f[2];
      r.alpha = std::stod(f[3]);
      r.num_samples = std::stoul(f[4]);
      if (f[5] != "context" && f[5] != "target") throw IngestionError("bad split");
      r.split = f[5] == "context" ? EvalSplit::Context : EvalSplit::Target;
      r.ll_mean = std::stod(f[6]);
      r.ll_std = std::stod(f[7]);
      r.n_tasks = std::stoul(f[8]);
      r.seed = std::stoull(f[9]);
      r.wall_seconds = std::stod(f[10]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw IngestionError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<double> task_log_likelihoods(const NPParams& params, std::span<const Task> tasks,
                                         std::size_t num_samples, EvalSplit split,
                                         std::uint64_t seed) {
  if (tasks.empty()) throw DomainError("evaluation: empty task list");
  if (num_samples < 1) throw DomainError("evaluation: K must be >= 1");
  std::vector<double> out;
  out.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& task = tasks[i];
    Tape tape;
    const BoundParams p = bind_constants(tape, params);
    const LatentVars prior =
        latent_dist(p, encode_set(p, tape.constant(task.x_ctx), tape.constant(task.y_ctx)));
    RngStream rng(seed, "eval", i);
    Var eps = tape.constant(rng.normal_tensor(num_samples, params.config().latent_dim));
    Var z = reparam_sample(prior, eps);
    const Tensor& xs = split == EvalSplit::Context ? task.x_ctx : task.x_tgt;
    const Tensor& ys = split == EvalSplit::Context ? task.y_ctx : task.y_tgt;
    Var ll = sample_log_likelihoods(decode(p, tape.constant(xs), z), tape.constant(ys));
    const double points = static_cast<double>(ys.rows() * ys.cols());
    out.push_back(log_mean_exp(ll.value().values()) / points);
  }
  return out;
}

MetricsRecord eval_marginal_ll(const NPParams& params, std::span<const Task> tasks,
                               std::size_t num_samples, EvalSplit split, std::uint64_t seed,
                               const EvalLabels& labels) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> lls = task_log_likelihoods(params, tasks, num_samples, split, seed);
  const double n = static_cast<double>(lls.size());
  const double mean = pairwise_sum(lls) / n;
  double ss = 0.0;
  for (double v : lls) ss += (v - mean) * (v - mean);
  MetricsRecord r;
  r.exp_id = labels.exp_id;
  r.dataset = labels.dataset;
  r.objective = labels.objective;
  r.alpha = labels.alpha;
  r.num_samples = num_samples;
  r.split = split;
  r.ll_mean = mean;
  r.ll_std = lls.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  r.n_tasks = lls.size();
  r.seed = seed;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace rnp
