// Copyright 2026 The PLC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plc/checkpoint.h"

#include <bit>
#include <cstring>
#include <map>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>
#include "plc/text.h"

namespace plc {
namespace {

using nlohmann::json;

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  std::span<const uint8_t> Take(size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw std::runtime_error(std::string("checkpoint: truncated ") + what);
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  uint16_t U16(const char* what) {
    auto b = Take(2, what);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
  }
  uint32_t U32(const char* what) {
    auto b = Take(4, what);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

std::string_view DirectionName(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

json Metadata(const Checkpoint& c) {
  json activations = json::array();
  for (const auto& layer : c.params.dense) {
    activations.push_back(std::string(ActivationName(layer.activation)));
  }
  return json{{"frame_len", c.config.frame_len},
              {"sample_rate", c.config.sample_rate},
              {"lstm_units", c.config.lstm_units},
              {"dense_units", c.config.dense_units},
              {"dense_activations", activations},
              {"direction", DirectionName(c.direction)},
              {"dtype", "float32"}};
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  checkpoint.config.Validate();
  checkpoint.params.Validate();
  if (checkpoint.params.input_size() != checkpoint.config.frame_len ||
      checkpoint.params.lstm.size() != checkpoint.config.lstm_units.size() ||
      checkpoint.params.dense.size() != checkpoint.config.dense_units.size()) {
    throw std::invalid_argument("checkpoint: parameters do not match config");
  }
  std::string out(kCheckpointMagic, 4);
  PutU16(out, kCheckpointVersion);
  const std::string meta = Metadata(checkpoint).dump();
  PutU32(out, static_cast<uint32_t>(meta.size()));
  out += meta;

  std::vector<std::string> names;
  checkpoint.params.ForEachTensor(
      [&](const std::string& name, auto, const auto&) { names.push_back(name); });
  PutU32(out, static_cast<uint32_t>(names.size()));
  checkpoint.params.ForEachTensor([&](const std::string& name,
                                      std::span<const double> values,
                                      const std::vector<uint32_t>& shape) {
    PutU32(out, static_cast<uint32_t>(name.size()));
    out += name;
    PutU32(out, static_cast<uint32_t>(shape.size()));
    for (uint32_t d : shape) PutU32(out, d);
    for (double v : values) {
      PutU32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
    }
  });
  return out;
}

Checkpoint DecodeCheckpoint(std::span<const uint8_t> bytes) {
  Reader in(bytes);
  auto magic = in.Take(4, "magic");
  if (std::memcmp(magic.data(), kCheckpointMagic, 4) != 0) {
    throw std::runtime_error("checkpoint: bad magic (not a PLCM file)");
  }
  const uint16_t version = in.U16("version");
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kCheckpointVersion) + ")");
  }
  const uint32_t meta_len = in.U32("metadata length");
  auto meta_bytes = in.Take(meta_len, "metadata");
  Checkpoint c;
  std::vector<std::string> activations;
  try {
    const json meta = json::parse(meta_bytes.begin(), meta_bytes.end());
    c.config.frame_len = meta.at("frame_len").get<int>();
    c.config.sample_rate = meta.at("sample_rate").get<int>();
    c.config.lstm_units = meta.at("lstm_units").get<std::vector<int>>();
    c.config.dense_units = meta.at("dense_units").get<std::vector<int>>();
    activations = meta.at("dense_activations").get<std::vector<std::string>>();
    const auto direction = meta.at("direction").get<std::string>();
    if (direction == "forward") {
      c.direction = Direction::kForward;
    } else if (direction == "backward") {
      c.direction = Direction::kBackward;
    } else {
      throw std::runtime_error("unknown direction '" + direction + "'");
    }
    c.config.Validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("checkpoint: bad metadata: ") + e.what());
  }
  if (activations.size() != c.config.dense_units.size()) {
    throw std::runtime_error("checkpoint: activation count mismatch");
  }

  // Build the expected shapes, then fill from the tensor table.
  int width = c.config.frame_len;
  for (int units : c.config.lstm_units) {
    c.params.lstm.push_back(LstmParams<double>::Zero(width, units));
    width = units;
  }
  for (size_t k = 0; k < activations.size(); ++k) {
    const int units = c.config.dense_units[k];
    c.params.dense.push_back(DenseParams<double>::Zero(
        width, units, ParseActivation(activations[k])));
    width = units;
  }
  std::map<std::string, std::pair<std::vector<uint32_t>, std::span<double>>> slots;
  c.params.ForEachTensor([&](const std::string& name, std::span<double> values,
                             const std::vector<uint32_t>& shape) {
    slots.emplace(name, std::make_pair(shape, values));
  });

  const uint32_t count = in.U32("tensor count");
  if (count != slots.size()) {
    throw std::runtime_error("checkpoint: expected " +
                             std::to_string(slots.size()) + " tensors, found " +
                             std::to_string(count));
  }
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = in.U32("tensor name length");
    auto name_bytes = in.Take(name_len, "tensor name");
    const std::string name(name_bytes.begin(), name_bytes.end());
    const auto it = slots.find(name);
    if (it == slots.end()) {
      throw std::runtime_error("checkpoint: unexpected tensor '" + name + "'");
    }
    const uint32_t rank = in.U32("tensor rank");
    std::vector<uint32_t> dims(rank);
    for (auto& d : dims) d = in.U32("tensor dims");
    if (dims != it->second.first) {
      throw std::runtime_error("checkpoint: tensor '" + name +
                               "' has the wrong shape");
    }
    std::span<double> dst = it->second.second;
    auto raw = in.Take(dst.size() * 4, "tensor data");
    for (size_t j = 0; j < dst.size(); ++j) {
      const uint32_t bits = static_cast<uint32_t>(raw[4 * j]) |
                            (static_cast<uint32_t>(raw[4 * j + 1]) << 8) |
                            (static_cast<uint32_t>(raw[4 * j + 2]) << 16) |
                            (static_cast<uint32_t>(raw[4 * j + 3]) << 24);
      dst[j] = static_cast<double>(std::bit_cast<float>(bits));
    }
    slots.erase(it);
  }
  if (!in.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return c;
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const Checkpoint& checkpoint) {
  WriteFileBytes(path, EncodeCheckpoint(checkpoint));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeCheckpoint(bytes);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

StackedCellParams<double> QuantizeToFloat(const StackedCellParams<double>& p) {
  return p.Cast<float>().Cast<double>();
}

}  // namespace plc
