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

#include "plc/loss_sim.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "plc/random.h"

namespace plc {

void MarkovLossModel::Validate() const {
  if (!(p_loss >= 0.0 && p_loss <= 1.0) ||
      !(p_noloss >= 0.0 && p_noloss <= 1.0)) {
    throw std::invalid_argument("MarkovLossModel: probabilities must be in "
                                "[0, 1], got p_L = " + std::to_string(p_loss) +
                                ", p_N = " + std::to_string(p_noloss));
  }
}

LossMask SampleMask(const MarkovLossModel& model, size_t num_frames,
                    uint64_t seed) {
  model.Validate();
  if (num_frames == 0) throw std::invalid_argument("SampleMask: T must be >= 1");
  Rng rng(seed);
  std::vector<uint8_t> flags(num_frames);
  bool lost = false;
  flags[0] = 1;
  for (size_t t = 1; t < num_frames; ++t) {
    const double stay = lost ? model.p_loss : model.p_noloss;
    if (!(rng.Uniform() < stay)) lost = !lost;
    flags[t] = lost ? 0 : 1;
  }
  return LossMask(std::move(flags));
}

double ExpectedDropRate(const MarkovLossModel& model) {
  model.Validate();
  const double leave_n = 1.0 - model.p_noloss;
  const double leave_l = 1.0 - model.p_loss;
  if (leave_n + leave_l == 0.0) {
    throw std::invalid_argument(
        "ExpectedDropRate: p_L = p_N = 1 has no unique stationary state");
  }
  return leave_n / (leave_n + leave_l);
}

FrameSequence ApplyMask(const FrameSequence& frames, const LossMask& mask) {
  CheckMaskMatches(frames, mask, "ApplyMask");
  FrameSequence out = frames;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (!mask.received(t)) {
      auto f = out.frame(t);
      std::fill(f.begin(), f.end(), 0.0);
    }
  }
  return out;
}

}  // namespace plc
