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

// Two-state (Gilbert) packet-loss model. State N (no loss) emits 1, state L
// (loss) emits 0; p_noloss and p_loss are the self-transition probabilities.

#ifndef PLC_LOSS_SIM_H_
#define PLC_LOSS_SIM_H_

#include <cstdint>

#include "plc/frames.h"

namespace plc {

struct MarkovLossModel {
  double p_loss = 0.0;    // P(L -> L)
  double p_noloss = 1.0;  // P(N -> N)

  void Validate() const;
};

// Samples T states starting in N. The start state is the first symbol, so
// mask[0] is always 1. Each further state follows by one transition, using
// Rng::Uniform() < p_self to decide whether to stay.
LossMask SampleMask(const MarkovLossModel& model, size_t num_frames,
                    uint64_t seed);

// Stationary probability of L: (1 - p_N) / ((1 - p_N) + (1 - p_L)).
// Throws when p_L = p_N = 1 (no unique stationary distribution).
double ExpectedDropRate(const MarkovLossModel& model);

// Lost frames replaced by zeros, received frames copied.
FrameSequence ApplyMask(const FrameSequence& frames, const LossMask& mask);

}  // namespace plc

#endif  // PLC_LOSS_SIM_H_
