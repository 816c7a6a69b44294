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

#include "plc/mask_file.h"

#include <stdexcept>

#include "plc/text.h"

namespace plc {
namespace {

MaskFileHeader ParseHeader(std::string_view line) {
  MaskFileHeader header;
  bool seen_frames = false;
  for (std::string_view field : Split(line.substr(1), ' ')) {
    if (field.empty()) continue;
    const size_t eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("mask header: malformed field '" +
                                  std::string(field) + "'");
    }
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "frames") {
      header.frames = static_cast<size_t>(ParseUint(value, "frames"));
      seen_frames = true;
    } else if (key == "p_L") {
      header.p_loss = ParseDouble(value, "p_L");
    } else if (key == "p_N") {
      header.p_noloss = ParseDouble(value, "p_N");
    } else if (key == "seed") {
      header.seed = ParseUint(value, "seed");
    } else {
      throw std::invalid_argument("mask header: unknown key '" +
                                  std::string(key) + "'");
    }
  }
  if (!seen_frames) throw std::invalid_argument("mask header: missing frames=");
  return header;
}

}  // namespace

std::string FormatMaskFile(const MaskFile& file) {
  std::string out;
  if (file.header.has_value()) {
    const auto& h = *file.header;
    out += "#frames=" + std::to_string(h.frames) + " p_L=" +
           FormatDouble(h.p_loss) + " p_N=" + FormatDouble(h.p_noloss) +
           " seed=" + std::to_string(h.seed) + "\n";
  }
  for (const auto& mask : file.masks) out += mask.ToString() + "\n";
  return out;
}

MaskFile ParseMaskFile(std::string_view text) {
  MaskFile file;
  bool first = true;
  for (std::string_view line : Split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!first) {
        throw std::invalid_argument("mask file: header must be the first line");
      }
      file.header = ParseHeader(line);
    } else {
      file.masks.push_back(LossMask::FromString(line));
    }
    first = false;
  }
  if (file.header.has_value()) {
    for (const auto& mask : file.masks) {
      if (mask.size() != file.header->frames) {
        throw std::invalid_argument(
            "mask file: line of " + std::to_string(mask.size()) +
            " flags, header says frames=" + std::to_string(file.header->frames));
      }
    }
  }
  return file;
}

MaskFile ReadMaskFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseMaskFile(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void WriteMaskFile(const std::filesystem::path& path, const MaskFile& file) {
  WriteFileBytes(path, FormatMaskFile(file));
}

}  // namespace plc
