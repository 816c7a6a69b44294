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

// Shortest round-trip number formatting shared by the text formats.

#ifndef PLC_TEXT_H_
#define PLC_TEXT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace plc {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

// Parses the whole of `text` or throws std::invalid_argument naming `what`.
double ParseDouble(std::string_view text, std::string_view what);
int64_t ParseInt(std::string_view text, std::string_view what);
uint64_t ParseUint(std::string_view text, std::string_view what);

std::vector<std::string_view> Split(std::string_view text, char sep);

// Whole-file I/O; failures throw std::runtime_error naming the path.
std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::string_view bytes);

}  // namespace plc

#endif  // PLC_TEXT_H_
