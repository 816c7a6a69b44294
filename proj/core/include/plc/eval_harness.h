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

// Loss-regime sweep: for each (p_L, p_N) pair, sample masks, conceal with each
// strategy, and score CCC of the concealed audio against the original.

#ifndef PLC_EVAL_HARNESS_H_
#define PLC_EVAL_HARNESS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plc/frames.h"
#include "plc/loss_sim.h"
#include "plc/rnn_core.h"

namespace plc {

enum class Strategy { kZero, kInterp, kForward, kBidir };

std::string_view StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

// The nine regimes of the reference evaluation grid, in its row order.
std::vector<MarkovLossModel> DefaultRegimes();

struct EvalGridSpec {
  std::vector<MarkovLossModel> regimes = DefaultRegimes();
  std::vector<Strategy> strategies = {Strategy::kZero, Strategy::kInterp,
                                      Strategy::kForward, Strategy::kBidir};
  int trials = 1;
  uint64_t base_seed = 0;  // trial k uses mask seed base_seed + k
  int frame_len = kDefaultFrameLen;
  int threads = 1;         // regimes evaluated concurrently

  void Validate() const;
};

struct EvalRow {
  double p_loss = 0.0;
  double p_noloss = 1.0;
  double drop_pct = 0.0;
  std::vector<std::pair<Strategy, double>> ccc_pct;  // in grid strategy order
  int trials = 0;

  // Throws if the strategy was not evaluated.
  double ccc(Strategy strategy) const;
  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

// Models used by the neural strategies; null when not loaded.
struct ConcealModels {
  const StackedCellParams<double>* forward = nullptr;
  const StackedCellParams<double>* backward = nullptr;
};

// Runs one strategy on zero-filled frames.
FrameSequence RunStrategy(Strategy strategy, const FrameSequence& lossy,
                          const LossMask& mask, const ConcealModels& models);

// One row per regime, averaged over trials, sorted by drop % ascending.
std::vector<EvalRow> EvaluateTrack(const AudioSignal& signal,
                                   const ConcealModels& models,
                                   const EvalGridSpec& spec);

// Per-track rows averaged across tracks (arithmetic mean of drop % and of
// each CCC), sorted by drop % ascending.
std::vector<EvalRow> EvaluateCorpus(std::span<const AudioSignal> tracks,
                                    const ConcealModels& models,
                                    const EvalGridSpec& spec);

// Stable sort by drop % ascending.
void SortByDrop(std::vector<EvalRow>& rows);

// Long-form CSV: header `p_L,p_N,drop_pct,strategy,ccc_pct,trials`, then one
// line per (row, strategy). Numbers use the shortest round-trip form.
std::string FormatCsv(std::span<const EvalRow> rows);
std::vector<EvalRow> ParseCsv(std::string_view csv);

// Wide text table: one line per row, one column per strategy.
std::string FormatTable(std::span<const EvalRow> rows);

}  // namespace plc

#endif  // PLC_EVAL_HARNESS_H_
