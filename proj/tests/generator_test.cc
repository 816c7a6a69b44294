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

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "plc/metrics.h"
#include "plc/optimizer.h"
#include "plc/synth.h"

namespace plc {
namespace {

std::vector<double> Flatten(std::span<const VectorD> frames) {
  std::vector<double> out;
  for (const auto& f : frames) out.insert(out.end(), f.data(), f.data() + f.size());
  return out;
}

TEST(GeneratorConfigTest, DefaultsAndValidation) {
  GeneratorConfig config;
  EXPECT_EQ(config.frame_len, 100);
  EXPECT_EQ(config.lstm_units, (std::vector<int>{768, 768}));
  EXPECT_EQ(config.dense_units, (std::vector<int>{256, 100}));
  EXPECT_NO_THROW(config.Validate());
  config.dense_units = {256, 99};
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = GeneratorConfig::Tiny(1);
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  EXPECT_NO_THROW(GeneratorConfig::Tiny(40).Validate());
}

TEST(TrainConfigTest, RejectsBadValues) {
  TrainConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.stress_depth = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = TrainConfig{};
  config.lr_plain = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

TEST(GenerateSequenceTest, ZeroModelPredictsZeros) {
  const auto params = InitGenerator(GeneratorConfig::Tiny(8), 1).ZerosLike();
  const auto frames = testing::RandomFrames(6, 8, 2);
  for (const auto& y : GenerateSequence<double>(params, frames)) {
    EXPECT_EQ(y, VectorD::Zero(8));
  }
}

TEST(GenerateSequenceTest, MatchesScalarOracle) {
  const auto params = testing::RandomStack(5, {6, 4}, {7, 5}, 9);
  const auto frames = testing::RandomFrames(5, 5, 10);
  const auto got = GenerateSequence<double>(params, frames);
  const auto expected = testing::ScalarGenerate(params, testing::ToVecs(frames));
  ASSERT_EQ(got.size(), 5u);
  for (size_t t = 0; t < 5; ++t) {
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(got[t][i], expected[t][i], 1e-12);
  }
}

TEST(GenerateSequenceTest, SingleFrameIsOneStackedStep) {
  const auto params = testing::RandomStack(4, {3}, {4}, 2);
  const auto frames = testing::RandomFrames(1, 4, 3);
  const auto step = StackedStep(params, frames[0], ZeroStates(params));
  EXPECT_EQ(GenerateSequence<double>(params, frames)[0], step.prediction);
}

TEST(ComposeGenerateTest, DepthOneIsTeacherForcedPass) {
  const auto params = testing::RandomStack(4, {5}, {4}, 4);
  const auto frames = testing::RandomFrames(7, 4, 5);
  auto teacher = GenerateSequence<double>(params, frames);
  teacher.pop_back();
  EXPECT_EQ(ComposeGenerate(params, frames, 1), teacher);
}

TEST(ComposeGenerateTest, DepthTwoIsGenerateOfGenerate) {
  const auto params = testing::RandomStack(4, {5, 3}, {6, 4}, 6);
  const auto frames = testing::RandomFrames(8, 4, 7);
  const auto once = GenerateSequence<double>(params, frames);
  const auto twice = GenerateSequence<double>(params, once);
  const auto composed = ComposeGenerate(params, frames, 2);
  ASSERT_EQ(composed.size(), 6u);
  for (size_t t = 0; t < composed.size(); ++t) EXPECT_EQ(composed[t], twice[t]);
}

TEST(ComposeGenerateTest, ZeroModelAnyDepth) {
  const auto params = testing::RandomStack(3, {4}, {3}, 1).ZerosLike();
  const auto frames = testing::RandomFrames(6, 3, 1);
  for (int d = 1; d <= 5; ++d) {
    for (const auto& y : ComposeGenerate(params, frames, d)) {
      EXPECT_EQ(y, VectorD::Zero(3));
    }
  }
}

TEST(ComposeGenerateTest, RejectsTooShortSequences) {
  const auto params = testing::RandomStack(3, {4}, {3}, 1);
  const auto frames = testing::RandomFrames(3, 3, 1);
  EXPECT_THROW(ComposeGenerate(params, frames, 3), std::invalid_argument);
  EXPECT_THROW(ComposeGenerate(params, frames, 0), std::invalid_argument);
  EXPECT_THROW(StressedLoss(params, frames, 3), std::invalid_argument);
}

TEST(StressWeightsTest, KnownValuesAndUnitSum) {
  const auto w = StressWeights(3);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[0], 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(w[1], 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(w[2], 4.0 / 7.0);
  for (int d = 1; d <= 12; ++d) {
    const auto wd = StressWeights(d);
    EXPECT_NEAR(std::accumulate(wd.begin(), wd.end(), 0.0), 1.0, 1e-15);
  }
  EXPECT_THROW(StressWeights(0), std::invalid_argument);
}

TEST(StressedLossTest, DepthOneIsNextFrameCccLoss) {
  const auto params = testing::RandomStack(4, {5}, {4}, 8);
  const auto frames = testing::RandomFrames(9, 4, 9);
  const auto pred = GenerateSequence<double>(params, frames);
  const auto targets = Flatten(std::span(frames).subspan(1));
  const auto preds = Flatten(std::span(pred).first(8));
  EXPECT_NEAR(StressedLoss(params, frames, 1), CccLoss(targets, preds), 1e-14);
}

TEST(StressedLossTest, WeightedSumOfHorizons) {
  const auto params = testing::RandomStack(4, {5}, {4}, 8);
  const auto frames = testing::RandomFrames(9, 4, 9);
  const auto w = StressWeights(3);
  double expected = 0;
  for (int i = 1; i <= 3; ++i) {
    const auto y = ComposeGenerate(params, frames, i);
    expected += w[i - 1] * CccLoss(Flatten(std::span(frames).subspan(i)), Flatten(y));
  }
  EXPECT_NEAR(StressedLoss(params, frames, 3), expected, 1e-14);
}

TEST(StressedLossTest, PerfectPredictorScoresZero) {
  // Every frame equals v; a model that ignores its input and emits v is a
  // perfect predictor at every horizon.
  VectorD v(4);
  v << 0.5, -0.25, 0.125, -0.6;
  auto params = testing::RandomStack(4, {3}, {4}, 1).ZerosLike();
  params.dense[0].bias = v.array().atanh().matrix();
  const std::vector<VectorD> frames(6, v);
  // The epsilon in the CCC denominator leaves about eps / var ~ 3e-12.
  for (int d = 1; d <= 3; ++d) {
    EXPECT_NEAR(StressedLoss(params, frames, d), 0.0, 1e-10);
  }
}

TEST(StressedLossTest, GradientMatchesFiniteDifferences) {
  // Frame length 4, T = 6, depth 2.
  auto params = testing::RandomStack(4, {6, 5}, {6, 4}, 123, 0.7);
  const auto frames = testing::RandomFrames(6, 4, 124);
  auto grads = params.ZerosLike();
  const double loss = StressedLossAndGradient(params, frames, 2, grads);
  EXPECT_NEAR(loss, StressedLoss(params, frames, 2), 1e-13);
  const auto check = testing::CheckParamGradients(
      params, grads, [&] { return StressedLoss(params, frames, 2); });
  EXPECT_LE(check.max_rel_error, 1e-5) << "norm rel " << check.norm_rel_error;
}

TEST(StressedLossTest, DepthThreeGradientMatchesFiniteDifferences) {
  auto params = testing::RandomStack(3, {4}, {3}, 55, 0.8);
  const auto frames = testing::RandomFrames(7, 3, 56);
  auto grads = params.ZerosLike();
  StressedLossAndGradient(params, frames, 3, grads);
  const auto check = testing::CheckParamGradients(
      params, grads, [&] { return StressedLoss(params, frames, 3); });
  EXPECT_LE(check.max_rel_error, 1e-5);
}

TEST(StressedLossTest, GradientsAccumulate) {
  const auto params = testing::RandomStack(3, {4}, {3}, 5);
  const auto frames = testing::RandomFrames(5, 3, 6);
  auto once = params.ZerosLike();
  StressedLossAndGradient(params, frames, 2, once);
  auto twice = params.ZerosLike();
  StressedLossAndGradient(params, frames, 2, twice);
  StressedLossAndGradient(params, frames, 2, twice);
  EXPECT_LE((twice.lstm[0].w_input - 2 * once.lstm[0].w_input).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(InferenceTest, DropoutSeedDoesNotAffectInference) {
  const auto params = testing::RandomStack(4, {5, 5}, {4}, 3);
  const auto frames = testing::RandomFrames(8, 4, 4);
  Rng a(1), b(999);
  EXPECT_EQ(ForwardSequence(params, frames, nullptr, 0.0, &a),
            ForwardSequence(params, frames, nullptr, 0.0, &b));
  Rng c(1), d(999);
  EXPECT_NE(ForwardSequence(params, frames, nullptr, 0.5, &c),
            ForwardSequence(params, frames, nullptr, 0.5, &d));
}

TEST(SegmentDatasetTest, CutsWholeFrames) {
  AudioSignal track{std::vector<double>(1050, 0.1), 1000};
  const std::vector<AudioSignal> data = {track};
  // 0.4 s at 1 kHz with 100-sample frames = 4 frames per segment; 10 whole
  // frames split as 4 + 4 + 2.
  const auto segs = SegmentDataset(data, 100, 1000, 0.4);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].size(), 4u);
  EXPECT_EQ(segs[2].size(), 2u);
}

TEST(SegmentDatasetTest, Errors) {
  const std::vector<AudioSignal> empty;
  EXPECT_THROW(SegmentDataset(empty, 100, 16000, 1.0), std::invalid_argument);
  const std::vector<AudioSignal> short_track = {{std::vector<double>(150, 0), 16000}};
  EXPECT_THROW(SegmentDataset(short_track, 100, 16000, 1.0), std::invalid_argument);
  const std::vector<AudioSignal> wrong_rate = {{std::vector<double>(1000, 0), 8000}};
  EXPECT_THROW(SegmentDataset(wrong_rate, 100, 16000, 1.0), std::invalid_argument);
}

TEST(AdamTest, FirstStepMovesByLearningRateAgainstGradientSign) {
  auto params = testing::RandomStack(3, {2}, {3}, 1);
  const auto before = params;
  auto grads = params.ZerosLike();
  grads.ForEachTensor([](const std::string&, std::span<double> v, const auto&) {
    for (size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 ? 1.0 : -3.0);
  });
  Adam adam(params, AdamConfig{});
  adam.Step(params, grads, 0.01);
  EXPECT_EQ(adam.steps(), 1);
  std::vector<double> a, b, g;
  auto collect = [](std::vector<double>& out) {
    return [&out](const std::string&, std::span<const double> v, const auto&) {
      out.insert(out.end(), v.begin(), v.end());
    };
  };
  params.ForEachTensor(collect(a));
  before.ForEachTensor(collect(b));
  grads.ForEachTensor(collect(g));
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i] - b[i], -0.01 * (g[i] > 0 ? 1 : -1), 1e-9);
  }
}

TEST(AdamTest, TimeDecay) {
  const auto params = testing::RandomStack(3, {2}, {3}, 1);
  Adam adam(params, AdamConfig{0.9, 0.999, 1e-8, 0.0015});
  EXPECT_DOUBLE_EQ(adam.CurrentLearningRate(0.003), 0.003);
  auto p = params;
  for (int i = 0; i < 10; ++i) adam.Step(p, params.ZerosLike(), 0.003);
  EXPECT_DOUBLE_EQ(adam.CurrentLearningRate(0.003), 0.003 / (1 + 0.015));
}

std::vector<AudioSignal> TinyCorpus() {
  SynthConfig config;
  config.seconds = 0.25;
  return SynthesizeCorpus(config, 2, 40);
}

TEST(TrainTest, ZeroEpochsReturnsInitialization) {
  const auto corpus = TinyCorpus();
  const auto gen = GeneratorConfig::Tiny(100);
  TrainConfig train;
  train.epochs_plain = 0;
  train.epochs_stress = 0;
  train.rng_seed = 12;
  const auto result = Train(corpus, gen, train);
  EXPECT_TRUE(result.history.empty());
  const auto init = InitGenerator(gen, 12);
  EXPECT_EQ(result.params.lstm[0].w_input, init.lstm[0].w_input);
  EXPECT_EQ(result.params.dense[1].bias, init.dense[1].bias);
}

TEST(TrainTest, ScheduleAndDeterminism) {
  const auto corpus = TinyCorpus();
  const auto gen = GeneratorConfig::Tiny(100);
  TrainConfig train;
  train.epochs_plain = 3;
  train.epochs_stress = 2;
  train.segment_seconds = 0.1;
  train.rng_seed = 5;
  std::vector<EpochReport> seen;
  const auto a = Train(corpus, gen, train, std::nullopt,
                       [&](const EpochReport& r) { seen.push_back(r); });
  ASSERT_EQ(a.history.size(), 5u);
  EXPECT_EQ(seen.size(), 5u);
  for (int e = 0; e < 5; ++e) {
    EXPECT_EQ(a.history[e].epoch, e);
    EXPECT_EQ(a.history[e].depth, e < 3 ? 1 : 3);
    EXPECT_TRUE(std::isfinite(a.history[e].mean_loss));
  }
  const auto b = Train(corpus, gen, train);
  EXPECT_EQ(a.params.lstm[1].w_recurrent, b.params.lstm[1].w_recurrent);
  EXPECT_EQ(a.history[4].mean_loss, b.history[4].mean_loss);
}

TEST(TrainTest, LossFallsOnSine) {
  const auto corpus = TinyCorpus();
  TrainConfig train;
  train.epochs_plain = 10;
  train.epochs_stress = 0;
  train.segment_seconds = 0.125;
  train.rng_seed = 3;
  const auto result = Train(corpus, GeneratorConfig::Tiny(100), train);
  EXPECT_LT(result.history[9].mean_loss, result.history[0].mean_loss);
}

TEST(TrainTest, RejectsBadInputs) {
  const std::vector<AudioSignal> empty;
  EXPECT_THROW(Train(empty, GeneratorConfig::Tiny(100), TrainConfig{}),
               std::invalid_argument);
  auto corpus = TinyCorpus();
  corpus[1].sample_rate = 8000;
  EXPECT_THROW(Train(corpus, GeneratorConfig::Tiny(100), TrainConfig{}),
               std::invalid_argument);
}

TEST(TimeReversedTest, ReversesSamples) {
  const AudioSignal s{{1, 2, 3}, 16000};
  EXPECT_EQ(TimeReversed(s).samples, (std::vector<double>{3, 2, 1}));
}

}  // namespace
}  // namespace plc
