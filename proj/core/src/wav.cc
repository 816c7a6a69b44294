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

#include "plc/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "plc/text.h"

namespace plc {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t position() const { return pos_; }

  void Require(size_t n, const char* what) const {
    if (remaining() < n) {
      throw std::runtime_error(std::string("WAV: truncated ") + what);
    }
  }
  uint16_t U16() {
    Require(2, "field");
    const uint16_t v = static_cast<uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t U32() {
    Require(4, "field");
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::string Tag() {
    Require(4, "chunk tag");
    std::string tag(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return tag;
  }
  std::span<const uint8_t> Take(size_t n) {
    Require(n, "chunk");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void Skip(size_t n) { pos_ += std::min(n, remaining()); }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

WavAudio DecodeWav(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 12 || in.Tag() != "RIFF") {
    throw std::runtime_error("WAV: missing RIFF header");
  }
  in.U32();  // RIFF size; trust the chunks instead
  if (in.Tag() != "WAVE") throw std::runtime_error("WAV: not a WAVE file");

  WavAudio audio;
  bool have_format = false;
  bool have_data = false;
  while (in.remaining() >= 8 && !have_data) {
    const std::string tag = in.Tag();
    const uint32_t size = in.U32();
    if (tag == "fmt ") {
      auto body = in.Take(size);
      ByteReader fmt(body);
      uint16_t format = fmt.U16();
      audio.channels = fmt.U16();
      audio.sample_rate = static_cast<int>(fmt.U32());
      fmt.U32();  // byte rate
      fmt.U16();  // block align
      audio.bits_per_sample = fmt.U16();
      if (format == kFormatExtensible && size >= 40) {
        fmt.U16();  // cbSize
        fmt.U16();  // valid bits
        fmt.U32();  // channel mask
        format = fmt.U16();  // first two bytes of the subformat GUID
      }
      if (format != kFormatPcm) {
        throw std::runtime_error("WAV: only PCM is supported (format tag " +
                                 std::to_string(format) + ")");
      }
      if (audio.bits_per_sample != 16) {
        throw std::runtime_error("WAV: only 16-bit PCM is supported, got " +
                                 std::to_string(audio.bits_per_sample) + " bits");
      }
      if (audio.channels < 1) throw std::runtime_error("WAV: zero channels");
      have_format = true;
    } else if (tag == "data") {
      if (!have_format) throw std::runtime_error("WAV: data chunk before fmt");
      // Some writers leave the size as a placeholder; clamp to what exists.
      const size_t n = std::min<size_t>(size, in.remaining()) & ~size_t{1};
      auto body = in.Take(n);
      audio.pcm.resize(n / 2);
      for (size_t i = 0; i < audio.pcm.size(); ++i) {
        audio.pcm[i] = static_cast<int16_t>(
            static_cast<uint16_t>(body[2 * i] | (body[2 * i + 1] << 8)));
      }
      have_data = true;
    } else {
      in.Skip(size);
    }
    if (size % 2 == 1) in.Skip(1);
  }
  if (!have_format) throw std::runtime_error("WAV: no fmt chunk");
  if (!have_data) throw std::runtime_error("WAV: no data chunk");
  return audio;
}

std::string EncodeWav(const WavAudio& audio) {
  if (audio.bits_per_sample != 16) {
    throw std::invalid_argument("EncodeWav: only 16-bit PCM is supported");
  }
  const auto data_bytes = static_cast<uint32_t>(audio.pcm.size() * 2);
  const auto block_align = static_cast<uint16_t>(audio.channels * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, static_cast<uint16_t>(audio.channels));
  PutU32(out, static_cast<uint32_t>(audio.sample_rate));
  PutU32(out, static_cast<uint32_t>(audio.sample_rate) * block_align);
  PutU16(out, block_align);
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_bytes);
  for (int16_t s : audio.pcm) PutU16(out, static_cast<uint16_t>(s));
  return out;
}

WavAudio ReadWav(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeWav(bytes);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void WriteWav(const std::filesystem::path& path, const WavAudio& audio) {
  WriteFileBytes(path, EncodeWav(audio));
}

AudioSignal ToSignal(const WavAudio& audio) {
  if (audio.channels != 1) {
    throw std::invalid_argument("expected mono audio, got " +
                                std::to_string(audio.channels) + " channels");
  }
  if (audio.bits_per_sample != 16) {
    throw std::invalid_argument("expected 16-bit PCM");
  }
  AudioSignal signal;
  signal.sample_rate = audio.sample_rate;
  signal.samples.resize(audio.pcm.size());
  for (size_t i = 0; i < audio.pcm.size(); ++i) {
    signal.samples[i] = static_cast<double>(audio.pcm[i]) / 32768.0;
  }
  return signal;
}

WavAudio FromSignal(const AudioSignal& signal) {
  WavAudio audio;
  audio.sample_rate = signal.sample_rate;
  audio.pcm.resize(signal.samples.size());
  for (size_t i = 0; i < signal.samples.size(); ++i) {
    const double x = std::isfinite(signal.samples[i]) ? signal.samples[i] : 0.0;
    const double scaled = std::round(x * 32768.0);
    audio.pcm[i] = static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
  }
  return audio;
}

}  // namespace plc
