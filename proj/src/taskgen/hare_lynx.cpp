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

#include "rnp/taskgen/hare_lynx.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "rnp/errors.hpp"
#include "rnp/numkit/rng.hpp"
#include "rnp/taskgen/lotka_volterra.hpp"

namespace rnp {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw IngestionError("hare-lynx line " + std::to_string(line) + ": column '" + column +
                         "' is not numeric: '" + cell + "'");
  }
  return v;
}

}  // namespace

HareLynxSeries read_hare_lynx(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open hare-lynx file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("hare-lynx file is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  const std::array<std::string, 3> names{"year", "hare", "lynx"};
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::array<std::size_t, 3> col{};
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) {
      if (names[k] == "hare") {
        col[k] = kAbsent;
        continue;
      }
      throw IngestionError("hare-lynx line 1: missing column '" + names[k] + "'");
    }
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  HareLynxSeries series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw IngestionError("hare-lynx line " + std::to_string(line_no) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(cells.size()));
    }
    series.year.push_back(parse_number(cells[col[0]], line_no, names[0]));
    if (col[1] != kAbsent) series.hare.push_back(parse_number(cells[col[1]], line_no, names[1]));
    series.lynx.push_back(parse_number(cells[col[2]], line_no, names[2]));
  }
  if (series.size() < 2) {
    throw IngestionError("hare-lynx file needs at least 2 data rows, got " +
                         std::to_string(series.size()));
  }
  return series;
}

namespace {

void normalized(const HareLynxSeries& series, std::vector<double>& xs, std::vector<double>& ys) {
  try {
    xs = zscore(series.year);
  } catch (const DomainError&) {
    throw IngestionError("hare-lynx: column 'year' has zero variance");
  }
  try {
    ys = zscore(series.lynx);
  } catch (const DomainError&) {
    throw IngestionError("hare-lynx: column 'lynx' has zero variance");
  }
}

Task split_task(const std::vector<double>& xs, const std::vector<double>& ys,
                std::size_t num_context, RngStream& rng) {
  const std::size_t total = xs.size();
  if (num_context < 1 || num_context >= total) {
    throw DomainError("hare-lynx split: need 1 <= num_context < " + std::to_string(total));
  }
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < num_context; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(total - 1)));
    std::swap(idx[i], idx[j]);
  }
  // Targets keep chronological order.
  std::sort(idx.begin() + static_cast<std::ptrdiff_t>(num_context), idx.end());
  const std::size_t n = total - num_context;
  Task task{Tensor(num_context, 1), Tensor(num_context, 1), Tensor(n, 1), Tensor(n, 1)};
  for (std::size_t i = 0; i < num_context; ++i) {
    task.x_ctx[i] = xs[idx[i]];
    task.y_ctx[i] = ys[idx[i]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    task.x_tgt[i] = xs[idx[num_context + i]];
    task.y_tgt[i] = ys[idx[num_context + i]];
  }
  return task;
}

}  // namespace

Task hare_lynx_task(const HareLynxSeries& series, const HareLynxSplit& split) {
  std::vector<double> xs, ys;
  normalized(series, xs, ys);
  RngStream rng(split.seed, "hare_lynx/split");
  return split_task(xs, ys, split.num_context, rng);
}

Task load_hare_lynx(const std::filesystem::path& path, const HareLynxSplit& split) {
  return hare_lynx_task(read_hare_lynx(path), split);
}

std::vector<Task> hare_lynx_tasks(const HareLynxSeries& series, std::size_t count,
                                  std::size_t context_min, std::size_t context_max,
                                  std::uint64_t seed) {
  if (context_min < 1 || context_max < context_min || context_max >= series.size()) {
    throw DomainError("hare_lynx_tasks: invalid context range");
  }
  std::vector<double> xs, ys;
  normalized(series, xs, ys);
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, "hare_lynx/tasks", i);
    const auto m = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(context_min), static_cast<std::int64_t>(context_max)));
    tasks.push_back(split_task(xs, ys, m, rng));
  }
  return tasks;
}

}  // namespace rnp
