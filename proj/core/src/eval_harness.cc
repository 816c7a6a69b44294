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

#include "plc/eval_harness.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "plc/baselines.h"
#include "plc/conceal.h"
#include "plc/metrics.h"
#include "plc/text.h"

namespace plc {
namespace {

constexpr std::string_view kCsvHeader = "p_L,p_N,drop_pct,strategy,ccc_pct,trials";

std::string_view ColumnTitle(Strategy s) {
  switch (s) {
    case Strategy::kZero:
      return "0-conc";
    case Strategy::kInterp:
      return "interp";
    case Strategy::kForward:
      return "Forw";
    case Strategy::kBidir:
      return "Bidir";
  }
  return "?";
}

void CheckModels(const EvalGridSpec& spec, const ConcealModels& models) {
  for (Strategy s : spec.strategies) {
    if ((s == Strategy::kForward || s == Strategy::kBidir) &&
        models.forward == nullptr) {
      throw std::invalid_argument("strategy '" + std::string(StrategyName(s)) +
                                  "' needs a forward model");
    }
    if (s == Strategy::kBidir && models.backward == nullptr) {
      throw std::invalid_argument("strategy 'bidir' needs a backward model");
    }
  }
}

EvalRow EvaluateRegime(const AudioSignal& signal, const FrameSequence& frames,
                       const MarkovLossModel& regime,
                       const ConcealModels& models, const EvalGridSpec& spec) {
  EvalRow row;
  row.p_loss = regime.p_loss;
  row.p_noloss = regime.p_noloss;
  row.trials = spec.trials;
  for (Strategy s : spec.strategies) row.ccc_pct.emplace_back(s, 0.0);
  for (int k = 0; k < spec.trials; ++k) {
    const LossMask mask = SampleMask(regime, frames.num_frames(),
                                     spec.base_seed + static_cast<uint64_t>(k));
    const FrameSequence lossy = ApplyMask(frames, mask);
    row.drop_pct += 100.0 * mask.lost_fraction();
    for (auto& [strategy, score] : row.ccc_pct) {
      const AudioSignal concealed =
          UnframeSignal(RunStrategy(strategy, lossy, mask, models));
      score += 100.0 * Ccc(signal.samples, concealed.samples);
    }
  }
  row.drop_pct /= spec.trials;
  for (auto& entry : row.ccc_pct) entry.second /= spec.trials;
  return row;
}

std::vector<EvalRow> EvaluateUnsorted(const AudioSignal& signal,
                                      const ConcealModels& models,
                                      const EvalGridSpec& spec) {
  if (signal.samples.size() < 2) {
    throw std::invalid_argument("EvaluateTrack: track needs >= 2 samples");
  }
  const FrameSequence frames = FrameSignal(signal, spec.frame_len);
  std::vector<EvalRow> rows(spec.regimes.size());
  const auto run = [&](size_t r) {
    rows[r] = EvaluateRegime(signal, frames, spec.regimes[r], models, spec);
  };
  const size_t workers =
      std::min(static_cast<size_t>(std::max(spec.threads, 1)), rows.size());
  if (workers <= 1) {
    for (size_t r = 0; r < rows.size(); ++r) run(r);
    return rows;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t r = next++; r < rows.size(); r = next++) run(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& thread : pool) thread.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kZero:
      return "zero";
    case Strategy::kInterp:
      return "interp";
    case Strategy::kForward:
      return "forward";
    case Strategy::kBidir:
      return "bidir";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "zero") return Strategy::kZero;
  if (name == "interp") return Strategy::kInterp;
  if (name == "forward") return Strategy::kForward;
  if (name == "bidir") return Strategy::kBidir;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected zero, interp, forward or bidir)");
}

std::vector<MarkovLossModel> DefaultRegimes() {
  return {{0.1, 0.9}, {0.5, 0.9}, {0.1, 0.5}, {0.1, 0.1}, {0.5, 0.5},
          {0.9, 0.9}, {0.5, 0.1}, {0.9, 0.5}, {0.9, 0.1}};
}

void EvalGridSpec::Validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (strategies.empty()) throw std::invalid_argument("no strategies given");
  if (frame_len < 1) throw std::invalid_argument("frame_len must be >= 1");
  for (const auto& regime : regimes) regime.Validate();
}

double EvalRow::ccc(Strategy strategy) const {
  for (const auto& [s, value] : ccc_pct) {
    if (s == strategy) return value;
  }
  throw std::out_of_range("strategy '" + std::string(StrategyName(strategy)) +
                          "' not in row");
}

FrameSequence RunStrategy(Strategy strategy, const FrameSequence& lossy,
                          const LossMask& mask, const ConcealModels& models) {
  switch (strategy) {
    case Strategy::kZero:
      return ZeroFill(lossy, mask);
    case Strategy::kInterp:
      return LinearInterp(lossy, mask);
    case Strategy::kForward:
      if (models.forward == nullptr) {
        throw std::invalid_argument("forward concealment needs a model");
      }
      return ConcealForward(*models.forward, lossy, mask);
    case Strategy::kBidir:
      if (models.forward == nullptr || models.backward == nullptr) {
        throw std::invalid_argument(
            "bidirectional concealment needs forward and backward models");
      }
      return ConcealBidirectional(*models.forward, *models.backward, lossy, mask);
  }
  throw std::invalid_argument("unknown strategy");
}

std::vector<EvalRow> EvaluateTrack(const AudioSignal& signal,
                                   const ConcealModels& models,
                                   const EvalGridSpec& spec) {
  spec.Validate();
  CheckModels(spec, models);
  auto rows = EvaluateUnsorted(signal, models, spec);
  SortByDrop(rows);
  return rows;
}

std::vector<EvalRow> EvaluateCorpus(std::span<const AudioSignal> tracks,
                                    const ConcealModels& models,
                                    const EvalGridSpec& spec) {
  spec.Validate();
  CheckModels(spec, models);
  if (tracks.empty()) throw std::invalid_argument("EvaluateCorpus: no tracks");
  std::vector<EvalRow> total;
  for (const auto& track : tracks) {
    auto rows = EvaluateUnsorted(track, models, spec);
    if (total.empty()) {
      total = std::move(rows);
      continue;
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      total[r].drop_pct += rows[r].drop_pct;
      for (size_t s = 0; s < rows[r].ccc_pct.size(); ++s) {
        total[r].ccc_pct[s].second += rows[r].ccc_pct[s].second;
      }
    }
  }
  const auto n = static_cast<double>(tracks.size());
  for (auto& row : total) {
    row.drop_pct /= n;
    for (auto& entry : row.ccc_pct) entry.second /= n;
  }
  SortByDrop(total);
  return total;
}

void SortByDrop(std::vector<EvalRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EvalRow& a, const EvalRow& b) {
                     return a.drop_pct < b.drop_pct;
                   });
}

std::string FormatCsv(std::span<const EvalRow> rows) {
  std::string out(kCsvHeader);
  out += "\n";
  for (const auto& row : rows) {
    for (const auto& [strategy, score] : row.ccc_pct) {
      out += FormatDouble(row.p_loss) + "," + FormatDouble(row.p_noloss) + "," +
             FormatDouble(row.drop_pct) + "," + std::string(StrategyName(strategy)) +
             "," + FormatDouble(score) + "," + std::to_string(row.trials) + "\n";
    }
  }
  return out;
}

std::vector<EvalRow> ParseCsv(std::string_view csv) {
  std::vector<EvalRow> rows;
  bool header_seen = false;
  size_t line_no = 0;
  for (std::string_view line : Split(csv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw std::invalid_argument("CSV: unexpected header '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = Split(line, ',');
    if (fields.size() != 6) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                  ": expected 6 fields");
    }
    EvalRow key;
    key.p_loss = ParseDouble(fields[0], "p_L");
    key.p_noloss = ParseDouble(fields[1], "p_N");
    key.drop_pct = ParseDouble(fields[2], "drop_pct");
    const Strategy strategy = ParseStrategy(fields[3]);
    const double score = ParseDouble(fields[4], "ccc_pct");
    key.trials = static_cast<int>(ParseInt(fields[5], "trials"));
    const bool same_row = !rows.empty() && rows.back().p_loss == key.p_loss &&
                          rows.back().p_noloss == key.p_noloss &&
                          rows.back().drop_pct == key.drop_pct &&
                          rows.back().trials == key.trials;
    if (!same_row) rows.push_back(key);
    rows.back().ccc_pct.emplace_back(strategy, score);
  }
  if (!header_seen) throw std::invalid_argument("CSV: missing header");
  return rows;
}

std::string FormatTable(std::span<const EvalRow> rows) {
  std::vector<Strategy> columns;
  for (const auto& row : rows) {
    for (const auto& entry : row.ccc_pct) {
      if (std::find(columns.begin(), columns.end(), entry.first) == columns.end()) {
        columns.push_back(entry.first);
      }
    }
  }
  std::string out;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%5s %5s %8s", "p_L", "p_N", "drop %");
  out += buffer;
  for (Strategy s : columns) {
    std::snprintf(buffer, sizeof(buffer), " %8s", std::string(ColumnTitle(s)).c_str());
    out += buffer;
  }
  out += "\n";
  for (const auto& row : rows) {
    std::snprintf(buffer, sizeof(buffer), "%5.2g %5.2g %8.2f", row.p_loss,
                  row.p_noloss, row.drop_pct);
    out += buffer;
    for (Strategy s : columns) {
      const auto it = std::find_if(row.ccc_pct.begin(), row.ccc_pct.end(),
                                   [s](const auto& e) { return e.first == s; });
      if (it == row.ccc_pct.end()) {
        std::snprintf(buffer, sizeof(buffer), " %8s", "-");
      } else {
        std::snprintf(buffer, sizeof(buffer), " %8.2f", it->second);
      }
      out += buffer;
    }
    out += "\n";
  }
  return out;
}

}  // namespace plc
