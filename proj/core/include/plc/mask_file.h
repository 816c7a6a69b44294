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

// Text sidecar for loss masks: one mask per line as '0'/'1' characters, with
// an optional leading header line
//   #frames=T p_L=0.1 p_N=0.9 seed=7

#ifndef PLC_MASK_FILE_H_
#define PLC_MASK_FILE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plc/frames.h"

namespace plc {

struct MaskFileHeader {
  size_t frames = 0;
  double p_loss = 0.0;
  double p_noloss = 1.0;
  uint64_t seed = 0;
  friend bool operator==(const MaskFileHeader&, const MaskFileHeader&) = default;
};

struct MaskFile {
  std::optional<MaskFileHeader> header;
  std::vector<LossMask> masks;
  friend bool operator==(const MaskFile&, const MaskFile&) = default;
};

std::string FormatMaskFile(const MaskFile& file);
// Accepts LF or CRLF line endings; blank lines are ignored.
MaskFile ParseMaskFile(std::string_view text);

MaskFile ReadMaskFile(const std::filesystem::path& path);
void WriteMaskFile(const std::filesystem::path& path, const MaskFile& file);

}  // namespace plc

#endif  // PLC_MASK_FILE_H_
