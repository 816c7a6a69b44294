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

// Shared domain types: mono audio, its partition into fixed-length frames
// (packets), and the per-frame loss mask.

#ifndef PLC_FRAMES_H_
#define PLC_FRAMES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plc/rnn_core.h"

namespace plc {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr int kDefaultFrameLen = 100;

// Mono samples in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;
};

// Consecutive non-overlapping frames stored row-major. The last frame may be
// zero padded; `true_length` is the sample count of the source signal.
class FrameSequence {
 public:
  FrameSequence() = default;
  // All-zero sequence.
  FrameSequence(size_t num_frames, int frame_len, int sample_rate,
                size_t true_length);

  size_t num_frames() const { return num_frames_; }
  int frame_len() const { return frame_len_; }
  int sample_rate() const { return sample_rate_; }
  size_t true_length() const { return true_length_; }

  std::span<double> frame(size_t t);
  std::span<const double> frame(size_t t) const;
  Eigen::Map<const VectorD> frame_vector(size_t t) const;

  std::span<const double> samples() const { return samples_; }
  std::span<double> mutable_samples() { return samples_; }

  std::vector<VectorD> ToVectors() const;
  // Frames [begin, end) as vectors.
  std::vector<VectorD> ToVectors(size_t begin, size_t end) const;

  // Same frames in reverse order, each frame's samples reversed. The padded
  // tail therefore moves to the front; `true_length` is kept.
  FrameSequence Reversed() const;

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;

 private:
  size_t num_frames_ = 0;
  int frame_len_ = 0;
  int sample_rate_ = kDefaultSampleRate;
  size_t true_length_ = 0;
  std::vector<double> samples_;
};

// Splits into ceil(n / frame_len) frames, zero padding the remainder.
FrameSequence FrameSignal(const AudioSignal& signal, int frame_len);

// Inverse of FrameSignal: concatenates and trims to the true length.
AudioSignal UnframeSignal(const FrameSequence& frames);

// Per-frame binary mask; 1 = received, 0 = lost.
class LossMask {
 public:
  LossMask() = default;
  // Throws unless every flag is 0 or 1.
  explicit LossMask(std::vector<uint8_t> flags);
  static LossMask AllReceived(size_t n) {
    return LossMask(std::vector<uint8_t>(n, 1));
  }

  size_t size() const { return flags_.size(); }
  bool received(size_t t) const { return flags_[t] != 0; }
  uint8_t operator[](size_t t) const { return flags_[t]; }
  const std::vector<uint8_t>& flags() const { return flags_; }
  size_t lost_count() const;
  double lost_fraction() const;

  LossMask Reversed() const;
  std::string ToString() const;
  static LossMask FromString(std::string_view bits);

  friend bool operator==(const LossMask&, const LossMask&) = default;

 private:
  std::vector<uint8_t> flags_;
};

void CheckMaskMatches(const FrameSequence& frames, const LossMask& mask,
                      std::string_view where);

}  // namespace plc

#endif  // PLC_FRAMES_H_
