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

#include "rnp/taskgen/task.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "rnp/errors.hpp"

namespace rnp {

void Task::validate() const {
  if (x_ctx.rows() < 1) throw DomainError("Task: context set is empty");
  if (x_tgt.rows() < 1) throw DomainError("Task: target set is empty");
  if (y_ctx.rows() != x_ctx.rows() || y_tgt.rows() != x_tgt.rows()) {
    throw DomainError("Task: input/output row counts differ");
  }
  if (x_ctx.cols() != x_tgt.cols() || y_ctx.cols() != y_tgt.cols() || x_ctx.cols() == 0 ||
      y_ctx.cols() == 0) {
    throw DomainError("Task: inconsistent feature dimensions");
  }
  if (!x_ctx.all_finite() || !y_ctx.all_finite() || !x_tgt.all_finite() ||
      !y_tgt.all_finite()) {
    throw DomainError("Task: non-finite values");
  }
}

namespace {

nlohmann::json to_json(const Tensor& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < t.rows(); ++r) rows.push_back(t.row_values(r));
  return rows;
}

Tensor from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_array() || j.empty()) {
    throw IngestionError("task cache line " + std::to_string(line) + ": expected rows");
  }
  const std::size_t cols = j.front().size();
  std::vector<double> data;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) {
      throw IngestionError("task cache line " + std::to_string(line) + ": ragged rows");
    }
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return Tensor(j.size(), cols, std::move(data));
}

}  // namespace

void write_tasks_jsonl(const std::filesystem::path& path, const std::vector<Task>& tasks) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const Task& t : tasks) {
    nlohmann::json j{{"x_ctx", to_json(t.x_ctx)},
                     {"y_ctx", to_json(t.y_ctx)},
                     {"x_tgt", to_json(t.x_tgt)},
                     {"y_tgt", to_json(t.y_tgt)}};
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Task> read_tasks_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<Task> tasks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Task t;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      t = Task{from_json(j.at("x_ctx"), line_no), from_json(j.at("y_ctx"), line_no),
               from_json(j.at("x_tgt"), line_no), from_json(j.at("y_tgt"), line_no)};
    } catch (const nlohmann::json::exception& e) {
      throw IngestionError("task cache line " + std::to_string(line_no) + ": " + e.what());
    }
    t.validate();
    tasks.push_back(std::move(t));
  }
  return tasks;
}

}  // namespace rnp
