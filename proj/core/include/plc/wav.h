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

// RIFF/WAVE reader and writer for 16-bit PCM.

#ifndef PLC_WAV_H_
#define PLC_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plc/frames.h"

namespace plc {

struct WavAudio {
  std::vector<int16_t> pcm;  // interleaved
  int channels = 1;
  int sample_rate = kDefaultSampleRate;
  int bits_per_sample = 16;

  size_t frames() const { return channels > 0 ? pcm.size() / channels : 0; }
  friend bool operator==(const WavAudio&, const WavAudio&) = default;
};

// Accepts PCM (format 1, or WAVE_FORMAT_EXTENSIBLE with a PCM subformat) at 16
// bits; unknown chunks are skipped. Throws std::runtime_error otherwise.
WavAudio DecodeWav(std::span<const uint8_t> bytes);
std::string EncodeWav(const WavAudio& audio);

WavAudio ReadWav(const std::filesystem::path& path);
void WriteWav(const std::filesystem::path& path, const WavAudio& audio);

// Mono 16-bit only; samples are divided by 32768.
AudioSignal ToSignal(const WavAudio& audio);
// Inverse of ToSignal: scales by 32768, rounds, and clamps to int16.
WavAudio FromSignal(const AudioSignal& signal);

}  // namespace plc

#endif  // PLC_WAV_H_
