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
#include <string>

#include "rnp/npmodel/params.hpp"

namespace rnp {

struct CheckpointMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

struct Checkpoint {
  NPParams params;
  CheckpointMeta meta;
};

// Layout: 8-byte magic, u64 manifest length, JSON manifest, then every
// parameter as row-major little-endian binary64 in manifest order.
void save_checkpoint(const NPParams& params, const CheckpointMeta& meta,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rnp
