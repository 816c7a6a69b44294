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
#include <cmath>

#include <gtest/gtest.h>

#include "plc/loss_sim.h"
#include "plc/random.h"
#include "plc/synth.h"

namespace plc {
namespace {

FrameSequence Random(size_t frames, int len, uint64_t seed) {
  Rng rng(seed);
  FrameSequence out(frames, len, 16000, frames * len);
  for (double& v : out.mutable_samples()) v = rng.Uniform(-1, 1);
  return out;
}

TEST(ZeroFillTest, EqualsApplyMask) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto frames = Random(50, 10, seed);
    const auto mask = SampleMask({0.6, 0.7}, 50, seed);
    EXPECT_EQ(ZeroFill(frames, mask), ApplyMask(frames, mask));
  }
  const auto frames = Random(5, 4, 1);
  EXPECT_EQ(ZeroFill(frames, LossMask::AllReceived(5)), frames);
}

TEST(LinearInterpTest, ClosedFormExample) {
  FrameSequence frames(3, 2, 16000, 6);
  frames.frame(2)[0] = 1.0;
  frames.frame(2)[1] = 1.0;
  const auto out = LinearInterp(frames, LossMask::FromString("101"));
  EXPECT_NEAR(out.frame(1)[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(out.frame(1)[1], 2.0 / 3.0, 1e-15);
}

TEST(LinearInterpTest, ReconstructsARampAcrossInteriorGaps) {
  const auto ramp = FrameSignal(LinearRamp(2000, -0.8, 0.9), 100);
  const auto mask = LossMask::FromString("11001000111000010001");
  const auto out = LinearInterp(ApplyMask(ramp, mask), mask);
  const auto a = out.samples();
  const auto b = ramp.samples();
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(LinearInterpTest, EdgesHoldTheOnlyAnchor) {
  FrameSequence frames(4, 2, 16000, 8);
  frames.frame(1)[0] = 0.3;
  frames.frame(1)[1] = 0.4;
  frames.frame(2)[0] = 0.5;
  frames.frame(2)[1] = 0.6;
  const auto out = LinearInterp(frames, LossMask::FromString("0110"));
  EXPECT_EQ(out.frame(0)[0], 0.3);
  EXPECT_EQ(out.frame(0)[1], 0.3);
  EXPECT_EQ(out.frame(3)[0], 0.6);
  EXPECT_EQ(out.frame(3)[1], 0.6);
}

TEST(LinearInterpTest, AllLostIsSilence) {
  const auto frames = Random(6, 3, 2);
  const auto out = LinearInterp(frames, LossMask(std::vector<uint8_t>(6, 0)));
  for (double v : out.samples()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(LinearInterpTest, PreservesReceivedMonotoneAndBounded) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto frames = Random(40, 5, seed);
    auto flags = SampleMask({0.7, 0.6}, 40, seed + 100).flags();
    flags[flags.size() - 1] = 1;
    const LossMask mask(flags);
    const auto out = LinearInterp(ApplyMask(frames, mask), mask);
    size_t t = 0;
    while (t < 40) {
      if (mask.received(t)) {
        for (int i = 0; i < 5; ++i) EXPECT_EQ(out.frame(t)[i], frames.frame(t)[i]);
        ++t;
        continue;
      }
      size_t end = t;
      while (!mask.received(end)) ++end;
      const double a = frames.frame(t - 1)[4];
      const double b = frames.frame(end)[0];
      double prev = a;
      for (size_t k = t; k < end; ++k) {
        for (double v : out.frame(k)) {
          EXPECT_GE(v, std::min(a, b));
          EXPECT_LE(v, std::max(a, b));
          if (a <= b) EXPECT_GE(v, prev);
          else EXPECT_LE(v, prev);
          prev = v;
        }
      }
      t = end;
    }
    EXPECT_EQ(LinearInterp(out, mask), out);
  }
}

TEST(BaselinesTest, LengthMismatchThrows) {
  const auto frames = Random(3, 2, 1);
  EXPECT_THROW(ZeroFill(frames, LossMask::AllReceived(2)), std::invalid_argument);
  EXPECT_THROW(LinearInterp(frames, LossMask::AllReceived(4)), std::invalid_argument);
}

}  // namespace
}  // namespace plc
