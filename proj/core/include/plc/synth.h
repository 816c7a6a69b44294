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

// Deterministic synthetic audio so that training and evaluation can run with
// no external data.

#ifndef PLC_SYNTH_H_
#define PLC_SYNTH_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "plc/frames.h"

namespace plc {

struct SynthConfig {
  double seconds = 1.0;
  int sample_rate = kDefaultSampleRate;
  double carrier_hz = 440.0;
  double amplitude = 0.5;
  double am_depth = 0.2;     // relative amplitude swing
  double am_rate_hz = 3.0;
  double fm_depth_hz = 4.0;  // peak frequency deviation
  double fm_rate_hz = 2.0;
  int harmonics = 1;         // partials at k * carrier, amplitude 1/k
  double noise_level = 0.002;
};

// Modulated sine (plus optional harmonics and Gaussian noise). The phases of
// carrier and modulators are drawn from `seed`.
AudioSignal SynthesizeTrack(const SynthConfig& config, uint64_t seed);

// `count` tracks with seeds base_seed, base_seed + 1, ...
std::vector<AudioSignal> SynthesizeCorpus(const SynthConfig& config, int count,
                                          uint64_t base_seed);

// Named presets: "sine" (440 Hz modulated sine) and "mix" (three-partial
// tone at a seeded pitch between 150 and 400 Hz).
SynthConfig SynthPreset(std::string_view name);

// Straight line from `from` to `to` over n samples.
AudioSignal LinearRamp(size_t n, double from, double to,
                       int sample_rate = kDefaultSampleRate);

}  // namespace plc

#endif  // PLC_SYNTH_H_
