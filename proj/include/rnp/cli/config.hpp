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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rnp {

enum class KeyType { Int, Float, String, Bool, UintList, FloatList };

struct ConfigKey {
  std::string name;
  KeyType type;
  std::string default_value;
  std::string help;
};

// Every recognised key with its default, in documentation order.
const std::vector<ConfigKey>& config_registry();
const ConfigKey* find_config_key(std::string_view name);

// Flat key → value map over the registry. Values are stored canonically
// (floats as %.17g, bools as true/false) so equal settings hash equally.
class RunConfig {
 public:
  // All defaults.
  RunConfig();

  // `key = value` lines; `[section]` prefixes later keys with "section.";
  // '#' and ';' start comments; values may be double-quoted. Unknown keys,
  // malformed lines and ill-typed values raise ConfigError naming the line.
  void merge_file(const std::filesystem::path& path);
  void merge_text(std::string_view text, std::string_view origin = "<text>");
  void set(std::string_view key, std::string_view value);

  const std::string& raw(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;
  double get_float(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::string get_string(std::string_view key) const { return raw(key); }
  std::vector<std::uint64_t> get_uint_list(std::string_view key) const;
  std::vector<double> get_float_list(std::string_view key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  // "key = value" lines, sorted by key.
  std::string canonical_text() const;
  // FNV-1a 64 of canonical_text() without output locations, 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> parse_float_list(std::string_view text);
// Keys naming where results are written; they do not enter hash().
bool is_output_location(std::string_view key);

}  // namespace rnp
