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

#include "plc/conceal.h"

namespace plc {

FrameSequence ConcealForward(const StackedCellParams<double>& model,
                             const FrameSequence& frames, const LossMask& mask) {
  return ConcealSequence(NeuralCell<double>(model), frames, mask);
}

FrameSequence ConcealForward(const StackedCellParams<float>& model,
                             const FrameSequence& frames, const LossMask& mask) {
  return ConcealSequence(NeuralCell<float>(model), frames, mask);
}

FrameSequence ConcealBidirectional(const StackedCellParams<double>& forward,
                                   const StackedCellParams<double>& backward,
                                   const FrameSequence& frames,
                                   const LossMask& mask) {
  return ConcealBidirectional(NeuralCell<double>(forward),
                              NeuralCell<double>(backward), frames, mask);
}

FrameSequence ConcealBidirectional(const StackedCellParams<float>& forward,
                                   const StackedCellParams<float>& backward,
                                   const FrameSequence& frames,
                                   const LossMask& mask) {
  return ConcealBidirectional(NeuralCell<float>(forward),
                              NeuralCell<float>(backward), frames, mask);
}

}  // namespace plc
