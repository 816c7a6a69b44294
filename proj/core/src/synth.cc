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

#include "plc/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "plc/random.h"

namespace plc {

AudioSignal SynthesizeTrack(const SynthConfig& config, uint64_t seed) {
  if (!(config.seconds > 0.0) || config.sample_rate < 1) {
    throw std::invalid_argument("SynthesizeTrack: bad duration or rate");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  Rng rng(seed);
  double phase = rng.Uniform(0.0, kTwoPi);
  const double am_phase = rng.Uniform(0.0, kTwoPi);
  const double fm_phase = rng.Uniform(0.0, kTwoPi);
  const double fs = static_cast<double>(config.sample_rate);
  const auto n = static_cast<size_t>(std::llround(config.seconds * fs));

  AudioSignal out;
  out.sample_rate = config.sample_rate;
  out.samples.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    const double envelope =
        config.amplitude *
        (1.0 + config.am_depth * std::sin(kTwoPi * config.am_rate_hz * t + am_phase));
    double value = 0.0;
    double norm = 0.0;
    for (int h = 1; h <= config.harmonics; ++h) {
      value += std::sin(h * phase) / h;
      norm += 1.0 / h;
    }
    value = envelope * value / norm + config.noise_level * rng.Normal();
    out.samples[k] = std::clamp(value, -1.0, 1.0);
    const double freq =
        config.carrier_hz +
        config.fm_depth_hz * std::sin(kTwoPi * config.fm_rate_hz * t + fm_phase);
    phase = std::fmod(phase + kTwoPi * freq / fs, kTwoPi);
  }
  return out;
}

std::vector<AudioSignal> SynthesizeCorpus(const SynthConfig& config, int count,
                                          uint64_t base_seed) {
  std::vector<AudioSignal> corpus;
  corpus.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    SynthConfig track_config = config;
    if (config.harmonics > 1) {
      Rng pitch_rng(base_seed + static_cast<uint64_t>(i) + 0x9e3779b97f4a7c15ULL);
      track_config.carrier_hz = pitch_rng.Uniform(150.0, 400.0);
    }
    corpus.push_back(
        SynthesizeTrack(track_config, base_seed + static_cast<uint64_t>(i)));
  }
  return corpus;
}

SynthConfig SynthPreset(std::string_view name) {
  SynthConfig config;
  if (name == "sine") return config;
  if (name == "mix") {
    config.harmonics = 3;
    config.am_depth = 0.3;
    config.fm_depth_hz = 6.0;
    return config;
  }
  throw std::invalid_argument("unknown synthetic corpus '" + std::string(name) +
                              "' (expected sine or mix)");
}

AudioSignal LinearRamp(size_t n, double from, double to, int sample_rate) {
  AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const double a = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
    out.samples[k] = from + (to - from) * a;
  }
  return out;
}

}  // namespace plc
