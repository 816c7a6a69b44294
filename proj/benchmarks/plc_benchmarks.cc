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

#include <vector>

#include <benchmark/benchmark.h>

#include "plc/conceal.h"
#include "plc/generator.h"
#include "plc/loss_sim.h"
#include "plc/synth.h"

namespace plc {
namespace {

GeneratorConfig ConfigFor(int64_t full) {
  return full ? GeneratorConfig{} : GeneratorConfig::Tiny(100);
}

template <typename Scalar>
void BM_LstmStep(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  Rng rng(1);
  const std::vector<int> lstm = {hidden};
  const std::vector<int> dense = {100};
  const auto params = InitStackedCell(100, lstm, dense, rng).Cast<Scalar>();
  const Vector<Scalar> x = Vector<Scalar>::Constant(100, Scalar(0.1));
  auto s = LstmState<Scalar>::Zero(hidden);
  for (auto _ : state) {
    s = LstmStep(params.lstm[0], x, s);
    benchmark::DoNotOptimize(s.h.data());
  }
}
BENCHMARK(BM_LstmStep<float>)->Arg(32)->Arg(768);
BENCHMARK(BM_LstmStep<double>)->Arg(32)->Arg(768);

// One frame through the whole stack; Arg(1) is the full-size model.
void BM_StackedStepFloat(benchmark::State& state) {
  const auto params = InitGenerator(ConfigFor(state.range(0)), 1).Cast<float>();
  auto states = ZeroStates(params);
  const Vector<float> x = Vector<float>::Constant(100, 0.1f);
  for (auto _ : state) {
    auto step = StackedStep(params, x, states);
    states = std::move(step.states);
    benchmark::DoNotOptimize(step.prediction.data());
  }
  state.counters["realtime_x"] = benchmark::Counter(
      100.0 / 16000.0, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_StackedStepFloat)->Arg(0)->Arg(1);

// Streaming concealment, one frame per iteration, 10% loss.
void BM_StreamingConceal(benchmark::State& state) {
  const auto params = InitGenerator(ConfigFor(state.range(0)), 1).Cast<float>();
  const auto mask = SampleMask({0.1, 0.9}, 4096, 3);
  const auto track = SynthesizeTrack(SynthConfig{}, 2);
  StreamingConcealer stream{NeuralCell<float>(params)};
  size_t t = 0;
  for (auto _ : state) {
    const size_t frame = t % 160;
    const std::span<const double> x(track.samples.data() + frame * 100, 100);
    auto y = stream.Push(x, mask.received(t % mask.size()));
    benchmark::DoNotOptimize(y.data());
    ++t;
  }
  state.counters["realtime_x"] = benchmark::Counter(
      100.0 / 16000.0, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_StreamingConceal)->Arg(0)->Arg(1);

// Loss and exact gradient on one 0.5 s segment of the tiny model.
void BM_TrainingStep(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto params = InitGenerator(GeneratorConfig::Tiny(100), 1);
  SynthConfig config;
  config.seconds = 0.5;
  const auto frames = FrameSignal(SynthesizeTrack(config, 1), 100).ToVectors();
  Rng rng(2);
  for (auto _ : state) {
    auto grads = params.ZerosLike();
    benchmark::DoNotOptimize(
        StressedLossAndGradient(params, frames, depth, grads, 0.5, &rng));
  }
}
BENCHMARK(BM_TrainingStep)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace plc

BENCHMARK_MAIN();
