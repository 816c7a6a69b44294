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

#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "plc/baselines.h"
#include "plc/checkpoint.h"
#include "plc/conceal.h"
#include "plc/eval_harness.h"
#include "plc/generator.h"
#include "plc/loss_sim.h"
#include "plc/mask_file.h"
#include "plc/synth.h"
#include "plc/text.h"
#include "plc/wav.h"

namespace plc::cli {
namespace {

namespace fs = std::filesystem;

// Backward models use an independent seed stream derived from --seed.
constexpr uint64_t kBackwardSeedOffset = 7919;

struct CommonOptions {
  uint64_t seed = 0;
  int frame_len = kDefaultFrameLen;
  int sample_rate = kDefaultSampleRate;
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "Seed for every random choice")
      ->capture_default_str();
  cmd->add_option("--frame-len", o.frame_len, "Samples per frame")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--sample-rate", o.sample_rate,
                  "Expected sample rate in Hz; inputs must match")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

struct CorpusOptions {
  std::string synthetic;
  std::vector<std::string> inputs;
  int tracks = 8;
  double seconds = 1.0;
};

void AddCorpus(CLI::App* cmd, CorpusOptions& o, const std::string& inputs_help) {
  cmd->add_option("--synthetic", o.synthetic,
                  "Use a generated corpus: sine or mix")
      ->check(CLI::IsMember({"sine", "mix"}));
  cmd->add_option("--in", o.inputs, inputs_help);
  cmd->add_option("--tracks", o.tracks, "Synthetic track count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seconds", o.seconds, "Synthetic track length in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void CheckRate(int rate, int expected, const std::string& what) {
  if (rate != expected) {
    throw std::runtime_error(what + ": sample rate is " +
                             std::to_string(rate) + " Hz but " +
                             std::to_string(expected) +
                             " Hz is expected; resample the file first or pass "
                             "--sample-rate " +
                             std::to_string(rate));
  }
}

AudioSignal LoadMono(const fs::path& path, int expected_rate) {
  const WavAudio wav = ReadWav(path);
  if (wav.channels != 1) {
    throw std::runtime_error(path.string() + ": expected mono audio, got " +
                             std::to_string(wav.channels) + " channels");
  }
  CheckRate(wav.sample_rate, expected_rate, path.string());
  return ToSignal(wav);
}

// Expands directories to their .wav files in name order.
std::vector<fs::path> ExpandInputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (entry.is_regular_file() && ext == ".wav") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      if (found.empty()) throw std::runtime_error(in + ": no .wav files");
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

std::vector<AudioSignal> LoadCorpus(const CorpusOptions& o, const CommonOptions& c,
                                    uint64_t synth_seed) {
  if (o.synthetic.empty() == o.inputs.empty()) {
    throw std::runtime_error("give exactly one of --synthetic or --in");
  }
  if (!o.synthetic.empty()) {
    SynthConfig config = SynthPreset(o.synthetic);
    config.seconds = o.seconds;
    config.sample_rate = c.sample_rate;
    return SynthesizeCorpus(config, o.tracks, synth_seed);
  }
  std::vector<AudioSignal> corpus;
  for (const auto& path : ExpandInputs(o.inputs)) {
    corpus.push_back(LoadMono(path, c.sample_rate));
  }
  return corpus;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFileBytes(path, text);
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  CommonOptions common;
  std::string kind = "sine";
  double seconds = 1.0;
  std::string out;
};

int RunSynth(const SynthOptions& o, std::ostream& out) {
  SynthConfig config = SynthPreset(o.kind);
  config.seconds = o.seconds;
  config.sample_rate = o.common.sample_rate;
  const auto corpus = SynthesizeCorpus(config, 1, o.common.seed);
  WriteWav(o.out, FromSignal(corpus[0]));
  out << "wrote " << o.out << " (" << corpus[0].samples.size() << " samples)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  CommonOptions common;
  CorpusOptions corpus;
  std::vector<int> units = {768, 768};
  std::vector<int> dense;
  TrainConfig train;
  std::string out = "model.plcm";
  std::string out_bwd;
  std::string log;
};

nlohmann::json HistoryJson(const std::vector<EpochReport>& history) {
  auto epochs = nlohmann::json::array();
  for (const auto& r : history) {
    epochs.push_back({{"epoch", r.epoch},
                      {"depth", r.depth},
                      {"mean_loss", r.mean_loss},
                      {"optimizer_steps", r.optimizer_steps}});
  }
  return epochs;
}

int RunTrain(TrainOptions o, std::ostream& out) {
  GeneratorConfig gen;
  gen.frame_len = o.common.frame_len;
  gen.sample_rate = o.common.sample_rate;
  gen.lstm_units = o.units;
  gen.dense_units = o.dense.empty() ? std::vector<int>{256, gen.frame_len} : o.dense;
  gen.Validate();
  o.train.rng_seed = o.common.seed;
  o.train.Validate();

  const auto corpus = LoadCorpus(o.corpus, o.common, o.common.seed);
  nlohmann::json log = {
      {"seed", o.common.seed},
      {"generator",
       {{"frame_len", gen.frame_len},
        {"sample_rate", gen.sample_rate},
        {"lstm_units", gen.lstm_units},
        {"dense_units", gen.dense_units}}},
      {"train",
       {{"epochs_plain", o.train.epochs_plain},
        {"epochs_stress", o.train.epochs_stress},
        {"lr_plain", o.train.lr_plain},
        {"lr_stress", o.train.lr_stress},
        {"lr_decay", o.train.lr_decay},
        {"dropout", o.train.dropout_rate},
        {"stress_depth", o.train.stress_depth},
        {"segment_seconds", o.train.segment_seconds}}},
      {"corpus",
       {{"source", o.corpus.synthetic.empty() ? "wav" : o.corpus.synthetic},
        {"tracks", corpus.size()}}},
  };

  auto report = [&out](const char* which) {
    return [&out, which](const EpochReport& r) {
      out << which << " epoch " << r.epoch + 1 << " depth " << r.depth
          << " loss " << FormatDouble(r.mean_loss) << "\n";
    };
  };
  auto train_one = [&](const std::vector<AudioSignal>& data, uint64_t seed,
                       Direction direction, const std::string& path,
                       const char* name) {
    TrainConfig config = o.train;
    config.rng_seed = seed;
    const TrainResult result = Train(data, gen, config, std::nullopt, report(name));
    SaveCheckpoint(path, Checkpoint{gen, direction, result.params});
    log[name] = {{"checkpoint", fs::path(path).filename().string()},
                 {"seed", seed},
                 {"epochs", HistoryJson(result.history)}};
    out << "wrote " << path << "\n";
  };

  train_one(corpus, o.common.seed, Direction::kForward, o.out, "forward");
  if (!o.out_bwd.empty()) {
    std::vector<AudioSignal> reversed;
    for (const auto& track : corpus) reversed.push_back(TimeReversed(track));
    train_one(reversed, o.common.seed + kBackwardSeedOffset, Direction::kBackward,
              o.out_bwd, "backward");
  }
  const std::string log_path = o.log.empty() ? o.out + ".log.json" : o.log;
  WriteText(log_path, log.dump(2) + "\n");
  out << "wrote " << log_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate-loss

struct SimulateOptions {
  CommonOptions common;
  std::string in;
  double p_loss = 0.0;
  double p_noloss = 1.0;
  std::string out;
  std::string mask;
};

int RunSimulate(const SimulateOptions& o, std::ostream& out) {
  WavAudio wav = ReadWav(o.in);
  if (wav.channels != 1) {
    throw std::runtime_error(o.in + ": expected mono audio, got " +
                             std::to_string(wav.channels) + " channels");
  }
  CheckRate(wav.sample_rate, o.common.sample_rate, o.in);
  if (wav.pcm.empty()) throw std::runtime_error(o.in + ": no samples");
  const size_t len = static_cast<size_t>(o.common.frame_len);
  const size_t frames = (wav.pcm.size() + len - 1) / len;
  const MarkovLossModel model{o.p_loss, o.p_noloss};
  const LossMask mask = SampleMask(model, frames, o.common.seed);
  // Work on the PCM directly so received samples stay bit-identical.
  for (size_t t = 0; t < frames; ++t) {
    if (mask.received(t)) continue;
    const size_t end = std::min(wav.pcm.size(), (t + 1) * len);
    std::fill(wav.pcm.begin() + static_cast<std::ptrdiff_t>(t * len),
              wav.pcm.begin() + static_cast<std::ptrdiff_t>(end), int16_t{0});
  }
  WriteWav(o.out, wav);
  const std::string mask_path = o.mask.empty() ? o.out + ".mask" : o.mask;
  MaskFile file;
  file.header = MaskFileHeader{frames, o.p_loss, o.p_noloss, o.common.seed};
  file.masks = {mask};
  WriteMaskFile(mask_path, file);
  char rates[64];
  // With both states absorbing the chain never leaves N.
  const double expected =
      o.p_loss == 1.0 && o.p_noloss == 1.0 ? 0.0 : ExpectedDropRate(model);
  std::snprintf(rates, sizeof(rates), "%.2f%%, expected %.2f%%",
                100.0 * mask.lost_fraction(), 100.0 * expected);
  out << "lost " << mask.lost_count() << " of " << frames << " frames ("
      << rates << ")\n"
      << "wrote " << o.out << " and " << mask_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// conceal

struct ConcealOptions {
  CommonOptions common;
  std::string in;
  std::string mask;
  int mask_index = 0;
  std::string mode = "forward";
  std::string model;
  std::string model_bwd;
  bool stream = false;
  std::string out;
};

Checkpoint LoadModel(const std::string& path, Direction expected,
                     const CommonOptions& c) {
  Checkpoint cp = LoadCheckpoint(path);
  if (cp.direction != expected) {
    throw std::runtime_error(path + ": model was trained for the " +
                             (cp.direction == Direction::kForward ? "forward"
                                                                  : "backward") +
                             " direction");
  }
  if (cp.config.frame_len != c.frame_len) {
    throw std::runtime_error(path + ": model frame length is " +
                             std::to_string(cp.config.frame_len) +
                             ", pass --frame-len " +
                             std::to_string(cp.config.frame_len));
  }
  if (cp.config.sample_rate != c.sample_rate) {
    throw std::runtime_error(path + ": model expects " +
                             std::to_string(cp.config.sample_rate) + " Hz audio");
  }
  return cp;
}

int RunConceal(const ConcealOptions& o, std::ostream& out) {
  const Strategy strategy = ParseStrategy(o.mode);
  if (o.stream && strategy != Strategy::kForward) {
    throw std::runtime_error("--stream is only available with --mode forward");
  }
  std::optional<Checkpoint> fwd, bwd;
  if (strategy == Strategy::kForward || strategy == Strategy::kBidir) {
    if (o.model.empty()) throw std::runtime_error("--mode " + o.mode + " needs --model");
    fwd = LoadModel(o.model, Direction::kForward, o.common);
  }
  if (strategy == Strategy::kBidir) {
    if (o.model_bwd.empty()) {
      throw std::runtime_error("--mode bidir needs --model-bwd");
    }
    bwd = LoadModel(o.model_bwd, Direction::kBackward, o.common);
  }

  const AudioSignal signal = LoadMono(o.in, o.common.sample_rate);
  const MaskFile masks = ReadMaskFile(o.mask);
  if (o.mask_index < 0 || static_cast<size_t>(o.mask_index) >= masks.masks.size()) {
    throw std::runtime_error(o.mask + ": has no mask #" + std::to_string(o.mask_index));
  }
  const LossMask& mask = masks.masks[static_cast<size_t>(o.mask_index)];
  const FrameSequence frames = FrameSignal(signal, o.common.frame_len);
  if (mask.size() != frames.num_frames()) {
    throw std::runtime_error(o.mask + ": mask has " + std::to_string(mask.size()) +
                             " frames but the audio has " +
                             std::to_string(frames.num_frames()) + " frames of " +
                             std::to_string(o.common.frame_len) + " samples");
  }
  const FrameSequence lossy = ApplyMask(frames, mask);

  FrameSequence repaired;
  if (o.stream) {
    repaired = lossy;
    StreamingConcealer stream{NeuralCell<double>(fwd->params)};
    for (size_t t = 0; t < lossy.num_frames(); ++t) {
      const VectorD y = stream.Push(lossy.frame(t), mask.received(t));
      std::copy(y.data(), y.data() + y.size(), repaired.frame(t).begin());
    }
  } else {
    ConcealModels models;
    if (fwd) models.forward = &fwd->params;
    if (bwd) models.backward = &bwd->params;
    repaired = RunStrategy(strategy, lossy, mask, models);
  }
  WriteWav(o.out, FromSignal(UnframeSignal(repaired)));
  out << "concealed " << mask.lost_count() << " of " << mask.size()
      << " frames with " << o.mode << (o.stream ? " (streaming)" : "")
      << "\nwrote " << o.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  CommonOptions common;
  CorpusOptions corpus;
  std::string model;
  std::string model_bwd;
  std::vector<std::string> pairs;
  std::vector<std::string> strategies;
  int trials = 1;
  int threads = 1;
  std::string out;
  std::string table;
};

MarkovLossModel ParsePair(const std::string& text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 2) {
    throw std::runtime_error("--pairs expects p_L:p_N, got '" + text + "'");
  }
  MarkovLossModel m{ParseDouble(parts[0], "p_L"), ParseDouble(parts[1], "p_N")};
  m.Validate();
  return m;
}

int RunEvaluate(const EvaluateOptions& o, std::ostream& out) {
  std::optional<Checkpoint> fwd, bwd;
  if (!o.model.empty()) fwd = LoadModel(o.model, Direction::kForward, o.common);
  if (!o.model_bwd.empty()) {
    bwd = LoadModel(o.model_bwd, Direction::kBackward, o.common);
  }
  EvalGridSpec spec;
  spec.trials = o.trials;
  spec.base_seed = o.common.seed;
  spec.frame_len = o.common.frame_len;
  spec.threads = o.threads;
  if (!o.pairs.empty()) {
    spec.regimes.clear();
    for (const auto& p : o.pairs) spec.regimes.push_back(ParsePair(p));
  }
  if (!o.strategies.empty()) {
    spec.strategies.clear();
    for (const auto& s : o.strategies) spec.strategies.push_back(ParseStrategy(s));
  } else {
    // Default: every strategy the loaded models allow.
    spec.strategies = {Strategy::kZero, Strategy::kInterp};
    if (fwd) spec.strategies.push_back(Strategy::kForward);
    if (fwd && bwd) spec.strategies.push_back(Strategy::kBidir);
  }
  spec.Validate();

  // Held-out synthetic tracks: seeds disjoint from the training corpus.
  constexpr uint64_t kEvalCorpusOffset = 1000003;
  const auto corpus = LoadCorpus(o.corpus, o.common, o.common.seed + kEvalCorpusOffset);
  ConcealModels models;
  if (fwd) models.forward = &fwd->params;
  if (bwd) models.backward = &bwd->params;
  const auto rows = EvaluateCorpus(corpus, models, spec);

  const std::string table = FormatTable(rows);
  out << table;
  if (!o.out.empty()) {
    WriteText(o.out, FormatCsv(rows));
    out << "wrote " << o.out << "\n";
  }
  if (!o.table.empty()) WriteText(o.table, table);
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Packet loss concealment with recurrent next-frame models", "plc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "plc 0.1.0");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic test track");
  AddCommon(synth_cmd, synth.common);
  synth_cmd->add_option("--synthetic", synth.kind, "sine or mix")
      ->capture_default_str()
      ->check(CLI::IsMember({"sine", "mix"}));
  synth_cmd->add_option("--seconds", synth.seconds)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output WAV")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train next-frame models");
  AddCommon(train_cmd, train.common);
  AddCorpus(train_cmd, train.corpus, "Training WAV files or directories");
  train_cmd->add_option("--units", train.units, "LSTM widths, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--dense", train.dense,
                        "Dense widths; the last must equal --frame-len "
                        "(default 256,<frame-len>)")
      ->delimiter(',');
  train_cmd->add_option("--epochs-plain", train.train.epochs_plain)
      ->capture_default_str();
  train_cmd->add_option("--epochs-stress", train.train.epochs_stress)
      ->capture_default_str();
  train_cmd->add_option("--lr-plain", train.train.lr_plain)->capture_default_str();
  train_cmd->add_option("--lr-stress", train.train.lr_stress)->capture_default_str();
  train_cmd->add_option("--lr-decay", train.train.lr_decay)->capture_default_str();
  train_cmd->add_option("--dropout", train.train.dropout_rate)->capture_default_str();
  train_cmd->add_option("--stress-depth", train.train.stress_depth)
      ->capture_default_str();
  train_cmd->add_option("--segment-seconds", train.train.segment_seconds)
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "Forward model checkpoint")
      ->capture_default_str();
  train_cmd->add_option("--out-bwd", train.out_bwd,
                        "Also train a backward model and write it here");
  train_cmd->add_option("--log", train.log,
                        "JSON training log (default <out>.log.json)");

  SimulateOptions sim;
  auto* sim_cmd =
      app.add_subcommand("simulate-loss", "Drop frames with the two-state loss model");
  AddCommon(sim_cmd, sim.common);
  sim_cmd->add_option("--in", sim.in, "Input WAV")->required();
  sim_cmd->add_option("--p-loss", sim.p_loss, "P(stay lost)")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--p-noloss", sim.p_noloss, "P(stay received)")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--out", sim.out, "Lossy WAV")->required();
  sim_cmd->add_option("--mask", sim.mask, "Mask file (default <out>.mask)");

  ConcealOptions conceal;
  auto* conceal_cmd = app.add_subcommand("conceal", "Repair a lossy WAV");
  AddCommon(conceal_cmd, conceal.common);
  conceal_cmd->add_option("--in", conceal.in, "Lossy WAV")->required();
  conceal_cmd->add_option("--mask", conceal.mask, "Mask file")->required();
  conceal_cmd->add_option("--mask-index", conceal.mask_index,
                          "Which mask line to use")
      ->capture_default_str();
  conceal_cmd->add_option("--mode", conceal.mode, "zero, interp, forward or bidir")
      ->capture_default_str()
      ->check(CLI::IsMember({"zero", "interp", "forward", "bidir"}));
  conceal_cmd->add_option("--model", conceal.model, "Forward model checkpoint");
  conceal_cmd->add_option("--model-bwd", conceal.model_bwd, "Backward model checkpoint");
  conceal_cmd->add_flag("--stream", conceal.stream,
                        "Run the frame-by-frame streaming path (forward only)");
  conceal_cmd->add_option("--out", conceal.out, "Repaired WAV")->required();

  EvaluateOptions eval;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score strategies across loss regimes");
  AddCommon(eval_cmd, eval.common);
  AddCorpus(eval_cmd, eval.corpus, "WAV files or directories to evaluate on");
  eval_cmd->add_option("--model", eval.model, "Forward model checkpoint");
  eval_cmd->add_option("--model-bwd", eval.model_bwd, "Backward model checkpoint");
  eval_cmd->add_option("--pairs", eval.pairs,
                       "Loss regimes as p_L:p_N, comma separated (default: 9)")
      ->delimiter(',');
  eval_cmd->add_option("--strategies", eval.strategies,
                       "Subset of zero,interp,forward,bidir")
      ->delimiter(',');
  eval_cmd->add_option("--trials", eval.trials, "Masks per track and regime")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--threads", eval.threads, "Regimes evaluated in parallel")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out, "CSV report path");
  eval_cmd->add_option("--table", eval.table, "Text table path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth_cmd) return RunSynth(synth, out);
    if (*train_cmd) return RunTrain(train, out);
    if (*sim_cmd) return RunSimulate(sim, out);
    if (*conceal_cmd) return RunConceal(conceal, out);
    if (*eval_cmd) return RunEvaluate(eval, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace plc::cli
