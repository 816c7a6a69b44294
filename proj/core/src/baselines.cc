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

#include "plc/baselines.h"

#include <algorithm>

#include "plc/loss_sim.h"

namespace plc {

FrameSequence ZeroFill(const FrameSequence& frames, const LossMask& mask) {
  return ApplyMask(frames, mask);
}

FrameSequence LinearInterp(const FrameSequence& frames, const LossMask& mask) {
  CheckMaskMatches(frames, mask, "LinearInterp");
  FrameSequence out = frames;
  const size_t num_frames = frames.num_frames();
  const auto frame_len = static_cast<size_t>(frames.frame_len());
  auto samples = out.mutable_samples();
  size_t t = 0;
  while (t < num_frames) {
    if (mask.received(t)) {
      ++t;
      continue;
    }
    const size_t run_begin = t;
    while (t < num_frames && !mask.received(t)) ++t;
    const size_t run_end = t;

    const size_t first = run_begin * frame_len;
    const size_t gap = (run_end - run_begin) * frame_len;
    const bool has_left = run_begin > 0;
    const bool has_right = run_end < num_frames;
    const double a = has_left ? frames.samples()[first - 1] : 0.0;
    const double b = has_right ? frames.samples()[first + gap] : 0.0;
    for (size_t k = 1; k <= gap; ++k) {
      double value;
      if (has_left && has_right) {
        value = a + (b - a) * static_cast<double>(k) / static_cast<double>(gap + 1);
      } else if (has_right) {
        value = b;
      } else {
        value = a;  // 0 when nothing was received
      }
      samples[first + k - 1] = value;
    }
  }
  return out;
}

}  // namespace plc
