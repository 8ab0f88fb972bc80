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

#include "rnp/npmodel/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "rnp/errors.hpp"
#include "rnp/numkit/rng.hpp"
#include "rnp/version.hpp"

namespace rnp {
namespace {

constexpr char kMagic[8] = {'R', 'N', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr const char* kFormat = "rnp-checkpoint/1";

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::string encode_payload(const NPParams& params) {
  std::string out;
  out.reserve(params.num_scalars() * 8);
  for (const Tensor& t : params.values()) {
    for (double d : t.values()) put_u64(out, std::bit_cast<std::uint64_t>(d));
  }
  return out;
}

}  // namespace

void save_checkpoint(const NPParams& params, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
  const std::string payload = encode_payload(params);
  nlohmann::json layers = nlohmann::json::array();
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor& t = params.values()[i];
    layers.push_back({{"name", params.names()[i]},
                      {"rows", t.rows()},
                      {"cols", t.cols()},
                      {"offset", offset}});
    offset += t.size();
  }
  const nlohmann::json manifest = {{"format", kFormat},
                                   {"code_version", kCodeVersion},
                                   {"model", to_json(params.config())},
                                   {"layers", layers},
                                   {"num_values", offset},
                                   {"config_hash", meta.config_hash},
                                   {"seed", meta.seed},
                                   {"step", meta.step},
                                   {"payload_fnv1a64", hex64(fnv1a64(payload))}};
  const std::string text = manifest.dump();
  std::string bytes(kMagic, sizeof(kMagic));
  put_u64(bytes, text.size());
  bytes += text;
  bytes += payload;

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IntegrityError("bad checkpoint magic" + where);
  }
  const std::uint64_t mlen = get_u64(bytes.data() + 8);
  if (mlen > bytes.size() - 16) throw IntegrityError("truncated checkpoint manifest" + where);
  const std::string payload = bytes.substr(16 + mlen);

  Checkpoint ck;
  std::vector<std::string> names;
  std::vector<Tensor> values;
  try {
    const nlohmann::json m = nlohmann::json::parse(bytes.substr(16, mlen));
    if (m.at("format").get<std::string>() != kFormat) {
      throw IntegrityError("unsupported checkpoint format" + where);
    }
    const ModelConfig cfg = model_config_from_json(m.at("model"));
    const auto layout = param_layout(cfg);
    const auto& layers = m.at("layers");
    if (layers.size() != layout.size()) throw IntegrityError("layer count mismatch" + where);
    const std::size_t num_values = m.at("num_values").get<std::size_t>();
    if (payload.size() != num_values * 8) throw IntegrityError("payload size mismatch" + where);
    if (m.at("payload_fnv1a64").get<std::string>() != hex64(fnv1a64(payload))) {
      throw IntegrityError("payload checksum mismatch" + where);
    }
    std::size_t offset = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const auto& l = layers[i];
      const std::string name = l.at("name").get<std::string>();
      const std::size_t rows = l.at("rows").get<std::size_t>();
      const std::size_t cols = l.at("cols").get<std::size_t>();
      if (name != layout[i].first || rows != layout[i].second[0] || cols != layout[i].second[1]) {
        throw IntegrityError("layer '" + name + "' does not match the model config" + where);
      }
      if (l.at("offset").get<std::size_t>() != offset) {
        throw IntegrityError("layer '" + name + "' offset mismatch" + where);
      }
      Tensor t(rows, cols, 0.0);
      for (std::size_t j = 0; j < t.size(); ++j) {
        t[j] = std::bit_cast<double>(get_u64(payload.data() + 8 * (offset + j)));
      }
      if (!t.all_finite()) throw IntegrityError("layer '" + name + "' has non-finite values" + where);
      offset += t.size();
      names.push_back(name);
      values.push_back(std::move(t));
    }
    if (offset != num_values) throw IntegrityError("value count mismatch" + where);
    ck.meta.config_hash = m.at("config_hash").get<std::string>();
    ck.meta.seed = m.at("seed").get<std::uint64_t>();
    ck.meta.step = m.at("step").get<std::uint64_t>();
    ck.params = NPParams(cfg, std::move(names), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed checkpoint manifest") + where + ": " + e.what());
  } catch (const ConfigError& e) {
    throw IntegrityError(std::string("invalid model config") + where + ": " + e.what());
  }
  return ck;
}

}  // namespace rnp
