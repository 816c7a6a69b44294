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

#include "plc/frames.h"

#include <algorithm>
#include <stdexcept>

namespace plc {

FrameSequence::FrameSequence(size_t num_frames, int frame_len, int sample_rate,
                             size_t true_length)
    : num_frames_(num_frames),
      frame_len_(frame_len),
      sample_rate_(sample_rate),
      true_length_(true_length),
      samples_(num_frames * static_cast<size_t>(frame_len), 0.0) {
  if (frame_len < 1) throw std::invalid_argument("frame_len must be >= 1");
}

std::span<double> FrameSequence::frame(size_t t) {
  return std::span<double>(samples_).subspan(t * frame_len_, frame_len_);
}

std::span<const double> FrameSequence::frame(size_t t) const {
  return std::span<const double>(samples_).subspan(t * frame_len_, frame_len_);
}

Eigen::Map<const VectorD> FrameSequence::frame_vector(size_t t) const {
  return Eigen::Map<const VectorD>(samples_.data() + t * frame_len_,
                                   frame_len_);
}

std::vector<VectorD> FrameSequence::ToVectors() const {
  return ToVectors(0, num_frames_);
}

std::vector<VectorD> FrameSequence::ToVectors(size_t begin, size_t end) const {
  if (begin > end || end > num_frames_) {
    throw std::out_of_range("FrameSequence::ToVectors: bad range");
  }
  std::vector<VectorD> out;
  out.reserve(end - begin);
  for (size_t t = begin; t < end; ++t) out.emplace_back(frame_vector(t));
  return out;
}

FrameSequence FrameSequence::Reversed() const {
  FrameSequence out = *this;
  std::reverse(out.samples_.begin(), out.samples_.end());
  return out;
}

FrameSequence FrameSignal(const AudioSignal& signal, int frame_len) {
  if (frame_len < 1) throw std::invalid_argument("frame_len must be >= 1");
  if (signal.samples.empty()) {
    throw std::invalid_argument("FrameSignal: empty signal");
  }
  const size_t n = signal.samples.size();
  const size_t num_frames = (n + frame_len - 1) / frame_len;
  FrameSequence frames(num_frames, frame_len, signal.sample_rate, n);
  std::copy(signal.samples.begin(), signal.samples.end(),
            frames.mutable_samples().begin());
  return frames;
}

AudioSignal UnframeSignal(const FrameSequence& frames) {
  AudioSignal out;
  out.sample_rate = frames.sample_rate();
  const auto samples = frames.samples();
  const size_t n = std::min(frames.true_length(), samples.size());
  out.samples.assign(samples.begin(), samples.begin() + n);
  return out;
}

LossMask::LossMask(std::vector<uint8_t> flags) : flags_(std::move(flags)) {
  for (size_t t = 0; t < flags_.size(); ++t) {
    if (flags_[t] > 1) {
      throw std::invalid_argument("LossMask: flag " + std::to_string(t) +
                                  " is " + std::to_string(flags_[t]) +
                                  ", expected 0 or 1");
    }
  }
}

size_t LossMask::lost_count() const {
  return static_cast<size_t>(std::count(flags_.begin(), flags_.end(), 0));
}

double LossMask::lost_fraction() const {
  return flags_.empty() ? 0.0
                        : static_cast<double>(lost_count()) /
                              static_cast<double>(flags_.size());
}

LossMask LossMask::Reversed() const {
  return LossMask(std::vector<uint8_t>(flags_.rbegin(), flags_.rend()));
}

std::string LossMask::ToString() const {
  std::string out(flags_.size(), '0');
  for (size_t t = 0; t < flags_.size(); ++t) {
    if (flags_[t]) out[t] = '1';
  }
  return out;
}

LossMask LossMask::FromString(std::string_view bits) {
  std::vector<uint8_t> flags;
  flags.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument(std::string("LossMask: invalid character '") +
                                  ch + "'");
    }
    flags.push_back(ch == '1' ? 1 : 0);
  }
  return LossMask(std::move(flags));
}

void CheckMaskMatches(const FrameSequence& frames, const LossMask& mask,
                      std::string_view where) {
  if (mask.size() != frames.num_frames()) {
    throw std::invalid_argument(std::string(where) + ": mask has " +
                                std::to_string(mask.size()) +
                                " entries for " +
                                std::to_string(frames.num_frames()) + " frames");
  }
}

}  // namespace plc
