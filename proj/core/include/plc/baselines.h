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

// Reference concealment strategies.

#ifndef PLC_BASELINES_H_
#define PLC_BASELINES_H_

#include "plc/frames.h"

namespace plc {

// Lost frames become silence.
FrameSequence ZeroFill(const FrameSequence& frames, const LossMask& mask);

// Each maximal run of lost frames is filled sample by sample on the line from
// the last received sample before the run (a) to the first received sample
// after it (b): a + (b - a) * k / (g + 1), k = 1..g, g = lost sample count.
// A run at the start holds b, a run at the end holds a, and a fully lost
// sequence becomes silence.
FrameSequence LinearInterp(const FrameSequence& frames, const LossMask& mask);

}  // namespace plc

#endif  // PLC_BASELINES_H_
