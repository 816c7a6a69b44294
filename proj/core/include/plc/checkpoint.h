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

// Binary model checkpoint, all integers little-endian:
//
//   "PLCM"                 4 bytes
//   version                u16
//   metadata length        u32, then that many bytes of UTF-8 JSON
//   tensor count           u32
//   per tensor:
//     name length          u32, then the name
//     rank                 u32, then `rank` u32 dimensions
//     data                 prod(dims) float32, row-major
//
// Parameters are quantized to float32 on save.

#ifndef PLC_CHECKPOINT_H_
#define PLC_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "plc/generator.h"
#include "plc/rnn_core.h"

namespace plc {

inline constexpr char kCheckpointMagic[4] = {'P', 'L', 'C', 'M'};
inline constexpr uint16_t kCheckpointVersion = 1;

enum class Direction { kForward, kBackward };

struct Checkpoint {
  GeneratorConfig config;
  Direction direction = Direction::kForward;
  StackedCellParams<double> params;
};

std::string EncodeCheckpoint(const Checkpoint& checkpoint);
// Throws std::runtime_error on bad magic, unknown version, or tensors that do
// not match the metadata.
Checkpoint DecodeCheckpoint(std::span<const uint8_t> bytes);

void SaveCheckpoint(const std::filesystem::path& path,
                    const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Rounds every parameter to the nearest float32 (what a save/load cycle does).
StackedCellParams<double> QuantizeToFloat(const StackedCellParams<double>& p);

}  // namespace plc

#endif  // PLC_CHECKPOINT_H_
