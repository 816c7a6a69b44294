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

#include "plc/generator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "plc/metrics.h"

namespace plc {
namespace {

std::vector<double> Concatenate(std::span<const VectorD> frames) {
  std::vector<double> out;
  for (const auto& f : frames) out.insert(out.end(), f.data(), f.data() + f.size());
  return out;
}

void CheckDepth(size_t num_frames, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (num_frames <= static_cast<size_t>(depth)) {
    throw std::invalid_argument("need more than " + std::to_string(depth) +
                                " frames for depth " + std::to_string(depth) +
                                ", got " + std::to_string(num_frames));
  }
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (frame_len < 2) throw std::invalid_argument("frame_len must be >= 2");
  if (lstm_units.empty()) throw std::invalid_argument("no LSTM layers");
  if (dense_units.empty()) throw std::invalid_argument("no dense layers");
  if (dense_units.back() != frame_len) {
    throw std::invalid_argument("last dense width " +
                                std::to_string(dense_units.back()) +
                                " must equal frame_len " +
                                std::to_string(frame_len));
  }
  for (int u : lstm_units) {
    if (u < 1) throw std::invalid_argument("LSTM units must be >= 1");
  }
  for (int u : dense_units) {
    if (u < 1) throw std::invalid_argument("dense units must be >= 1");
  }
  if (sample_rate < 1) throw std::invalid_argument("sample_rate must be >= 1");
}

GeneratorConfig GeneratorConfig::Tiny(int frame_len) {
  GeneratorConfig config;
  config.frame_len = frame_len;
  config.lstm_units = {32, 32};
  config.dense_units = {32, frame_len};
  return config;
}

void TrainConfig::Validate() const {
  if (epochs_plain < 0 || epochs_stress < 0) {
    throw std::invalid_argument("epoch counts must be >= 0");
  }
  if (!(lr_plain > 0.0) || !(lr_stress > 0.0)) {
    throw std::invalid_argument("learning rates must be > 0");
  }
  if (lr_decay < 0.0) throw std::invalid_argument("lr_decay must be >= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("dropout_rate must be in [0, 1)");
  }
  if (stress_depth < 1) throw std::invalid_argument("stress_depth must be >= 1");
  if (!(segment_seconds > 0.0)) {
    throw std::invalid_argument("segment_seconds must be > 0");
  }
}

StackedCellParams<double> InitGenerator(const GeneratorConfig& config,
                                        uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  return InitStackedCell(config.frame_len, config.lstm_units,
                         config.dense_units, rng);
}

std::vector<VectorD> ComposeGenerate(const StackedCellParams<double>& params,
                                     std::span<const VectorD> frames,
                                     int depth) {
  CheckDepth(frames.size(), depth);
  std::vector<VectorD> current(frames.begin(), frames.end());
  for (int i = 1; i <= depth; ++i) {
    current.resize(frames.size() - static_cast<size_t>(i));
    current = GenerateSequence<double>(params, current);
  }
  return current;
}

std::vector<double> StressWeights(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  const double total = std::ldexp(1.0, depth) - 1.0;
  std::vector<double> weights(depth);
  for (int i = 1; i <= depth; ++i) weights[i - 1] = std::ldexp(1.0, i - 1) / total;
  return weights;
}

double StressedLoss(const StackedCellParams<double>& params,
                    std::span<const VectorD> frames, int depth) {
  CheckDepth(frames.size(), depth);
  const auto weights = StressWeights(depth);
  double loss = 0.0;
  std::vector<VectorD> current(frames.begin(), frames.end());
  for (int i = 1; i <= depth; ++i) {
    current.resize(frames.size() - static_cast<size_t>(i));
    current = GenerateSequence<double>(params, current);
    const auto target = Concatenate(frames.subspan(static_cast<size_t>(i)));
    loss += weights[i - 1] * CccLoss(target, Concatenate(current));
  }
  return loss;
}

double StressedLossAndGradient(const StackedCellParams<double>& params,
                               std::span<const VectorD> frames, int depth,
                               StackedCellParams<double>& grads,
                               double dropout_rate, Rng* dropout_rng) {
  CheckDepth(frames.size(), depth);
  const auto weights = StressWeights(depth);
  const size_t total = frames.size();
  const int frame_len = params.output_size();

  std::vector<SequenceTape> tapes(depth);
  std::vector<std::vector<VectorD>> outputs(depth);
  std::vector<std::vector<VectorD>> output_grads(depth);
  double loss = 0.0;
  std::vector<double> flat_grad;
  for (int i = 1; i <= depth; ++i) {
    const size_t n = total - static_cast<size_t>(i);
    std::span<const VectorD> input =
        i == 1 ? frames.first(n) : std::span<const VectorD>(outputs[i - 2]).first(n);
    outputs[i - 1] =
        ForwardSequence(params, input, &tapes[i - 1], dropout_rate, dropout_rng);
    const auto target = Concatenate(frames.subspan(static_cast<size_t>(i)));
    const double term =
        CccLossWithGradient(target, Concatenate(outputs[i - 1]), flat_grad);
    loss += weights[i - 1] * term;
    auto& g = output_grads[i - 1];
    g.resize(n);
    for (size_t t = 0; t < n; ++t) {
      g[t] = weights[i - 1] *
             Eigen::Map<const VectorD>(flat_grad.data() + t * frame_len, frame_len);
    }
  }
  for (int i = depth; i >= 1; --i) {
    auto input_grads =
        BackwardSequence(params, tapes[i - 1], output_grads[i - 1], grads);
    if (i > 1) {
      auto& upstream = output_grads[i - 2];
      for (size_t t = 0; t < input_grads.size(); ++t) upstream[t] += input_grads[t];
    }
  }
  return loss;
}

std::vector<std::vector<VectorD>> SegmentDataset(
    std::span<const AudioSignal> dataset, int frame_len, int sample_rate,
    double segment_seconds) {
  if (dataset.empty()) throw std::invalid_argument("empty dataset");
  const auto segment_frames = static_cast<size_t>(std::max(
      2.0, std::floor(segment_seconds * sample_rate / frame_len)));
  std::vector<std::vector<VectorD>> segments;
  for (size_t k = 0; k < dataset.size(); ++k) {
    const AudioSignal& track = dataset[k];
    if (track.sample_rate != sample_rate) {
      throw std::invalid_argument(
          "track " + std::to_string(k) + " has sample rate " +
          std::to_string(track.sample_rate) + " Hz, model expects " +
          std::to_string(sample_rate) + " Hz (resample it first)");
    }
    const size_t whole_frames = track.samples.size() / frame_len;
    if (whole_frames < 2) {
      throw std::invalid_argument("track " + std::to_string(k) +
                                  " is shorter than 2 frames");
    }
    for (size_t start = 0; start + 2 <= whole_frames; start += segment_frames) {
      const size_t end = std::min(whole_frames, start + segment_frames);
      std::vector<VectorD> seg;
      seg.reserve(end - start);
      for (size_t t = start; t < end; ++t) {
        seg.emplace_back(Eigen::Map<const VectorD>(
            track.samples.data() + t * frame_len, frame_len));
      }
      segments.push_back(std::move(seg));
    }
  }
  return segments;
}

TrainResult Train(std::span<const AudioSignal> dataset,
                  const GeneratorConfig& gen_config,
                  const TrainConfig& train_config,
                  std::optional<StackedCellParams<double>> initial,
                  const std::function<void(const EpochReport&)>& on_epoch) {
  gen_config.Validate();
  train_config.Validate();
  const auto segments =
      SegmentDataset(dataset, gen_config.frame_len, gen_config.sample_rate,
                     train_config.segment_seconds);
  if (train_config.epochs_stress > 0) {
    for (const auto& seg : segments) {
      if (seg.size() <= static_cast<size_t>(train_config.stress_depth)) {
        throw std::invalid_argument(
            "segment of " + std::to_string(seg.size()) +
            " frames is too short for stress depth " +
            std::to_string(train_config.stress_depth));
      }
    }
  }

  TrainResult result;
  if (initial.has_value()) {
    initial->Validate();
    if (initial->input_size() != gen_config.frame_len) {
      throw std::invalid_argument("initial parameters do not match frame_len");
    }
    result.params = std::move(*initial);
  } else {
    result.params = InitGenerator(gen_config, train_config.rng_seed);
  }

  Rng shuffle_rng(train_config.rng_seed + 1);
  Rng dropout_rng(train_config.rng_seed + 2);
  std::vector<size_t> order(segments.size());
  std::iota(order.begin(), order.end(), size_t{0});

  AdamConfig adam_config{train_config.adam_beta1, train_config.adam_beta2,
                         train_config.adam_epsilon, train_config.lr_decay};
  int epoch = 0;
  auto run_phase = [&](int epochs, int depth, double lr) {
    Adam adam(result.params, adam_config);
    for (int e = 0; e < epochs; ++e, ++epoch) {
      shuffle_rng.Shuffle(std::span<size_t>(order));
      double sum = 0.0;
      for (size_t idx : order) {
        auto grads = result.params.ZerosLike();
        const double loss = StressedLossAndGradient(
            result.params, segments[idx], depth, grads,
            train_config.dropout_rate, &dropout_rng);
        if (!std::isfinite(loss)) {
          std::ostringstream msg;
          msg << "non-finite training loss at epoch " << epoch << ", step "
              << adam.steps() << " (segment " << idx << ", depth " << depth
              << ")";
          throw std::runtime_error(msg.str());
        }
        adam.Step(result.params, grads, lr);
        sum += loss;
      }
      EpochReport report{epoch, depth, sum / static_cast<double>(order.size()),
                         adam.steps()};
      result.history.push_back(report);
      if (on_epoch) on_epoch(report);
    }
  };
  run_phase(train_config.epochs_plain, 1, train_config.lr_plain);
  run_phase(train_config.epochs_stress, train_config.stress_depth,
            train_config.lr_stress);
  return result;
}

AudioSignal TimeReversed(const AudioSignal& signal) {
  AudioSignal out = signal;
  std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

}  // namespace plc
