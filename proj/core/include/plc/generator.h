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

// Generative next-frame model: construction, teacher-forced generation,
// self-composition, the multi-horizon ("stressed") CCC objective, and the
// two-phase Adam training loop.

#ifndef PLC_GENERATOR_H_
#define PLC_GENERATOR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "plc/frames.h"
#include "plc/optimizer.h"
#include "plc/random.h"
#include "plc/rnn_core.h"

namespace plc {

struct GeneratorConfig {
  int frame_len = kDefaultFrameLen;
  std::vector<int> lstm_units = {768, 768};
  std::vector<int> dense_units = {256, 100};
  int sample_rate = kDefaultSampleRate;

  // Throws unless frame_len >= 2 and the last dense width equals frame_len.
  void Validate() const;

  // 2 x 32 LSTM with a 32-unit hidden dense layer.
  static GeneratorConfig Tiny(int frame_len = kDefaultFrameLen);
};

struct TrainConfig {
  int epochs_plain = 80;
  int epochs_stress = 40;
  double lr_plain = 0.0045;
  double lr_stress = 0.003;
  double lr_decay = 0.0015;
  double dropout_rate = 0.5;
  int stress_depth = 3;
  double segment_seconds = 20.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t rng_seed = 0;

  void Validate() const;
};

StackedCellParams<double> InitGenerator(const GeneratorConfig& config,
                                        uint64_t seed);

// Teacher-forced pass: predictions[t] estimates frames[t + 1]. Zero state at
// the start; n input frames produce n predictions.
template <typename Scalar>
std::vector<Vector<Scalar>> GenerateSequence(
    const StackedCellParams<Scalar>& params,
    std::span<const Vector<Scalar>> frames) {
  std::vector<Vector<Scalar>> out;
  out.reserve(frames.size());
  StackedState<Scalar> states = ZeroStates(params);
  for (const auto& frame : frames) {
    auto step = StackedStep(params, frame, states);
    states = std::move(step.states);
    out.push_back(std::move(step.prediction));
  }
  return out;
}

// y(i) = G(y(i-1)[0 .. T-i)), y(0) = frames. Returns y(depth), which holds
// T - depth frames; element t estimates frames[t + depth]. Requires
// depth >= 1 and T > depth.
std::vector<VectorD> ComposeGenerate(const StackedCellParams<double>& params,
                                     std::span<const VectorD> frames,
                                     int depth);

// Weight 2^(i-1) / (2^depth - 1) of the i-step-ahead term, i = 1..depth.
std::vector<double> StressWeights(int depth);

// Sum over i of StressWeights(depth)[i-1] * CCC loss between the
// concatenated targets frames[i .. T) and the concatenated y(i).
double StressedLoss(const StackedCellParams<double>& params,
                    std::span<const VectorD> frames, int depth);

// Same objective with exact gradients (full backpropagation through all
// compositions). Gradients are accumulated into `grads`. With a non-null
// `dropout_rng` and positive rate, training-mode dropout is applied after
// every LSTM layer in every composition.
double StressedLossAndGradient(const StackedCellParams<double>& params,
                               std::span<const VectorD> frames, int depth,
                               StackedCellParams<double>& grads,
                               double dropout_rate = 0.0,
                               Rng* dropout_rng = nullptr);

// Cuts each track into segments of `segment_seconds` and frames them; only
// whole frames are kept. Throws if any track yields no segment of >= 2
// frames.
std::vector<std::vector<VectorD>> SegmentDataset(
    std::span<const AudioSignal> dataset, int frame_len, int sample_rate,
    double segment_seconds);

struct EpochReport {
  int epoch = 0;  // 0-based over both phases
  int depth = 1;
  double mean_loss = 0.0;
  int64_t optimizer_steps = 0;
};

struct TrainResult {
  StackedCellParams<double> params;
  std::vector<EpochReport> history;
};

// Phase 1: epochs_plain epochs of depth-1 loss at lr_plain. Phase 2:
// epochs_stress epochs at depth stress_depth and lr_stress. One segment per
// optimizer step, order reshuffled every epoch. Each phase starts a fresh
// Adam state. Throws on an empty dataset, a sample-rate mismatch, or a
// non-finite loss.
TrainResult Train(std::span<const AudioSignal> dataset,
                  const GeneratorConfig& gen_config,
                  const TrainConfig& train_config,
                  std::optional<StackedCellParams<double>> initial = std::nullopt,
                  const std::function<void(const EpochReport&)>& on_epoch = {});

// Reverses a signal in time (used to train the backward model).
AudioSignal TimeReversed(const AudioSignal& signal);

}  // namespace plc

#endif  // PLC_GENERATOR_H_
