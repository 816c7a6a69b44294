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

// Recurrent concealment: a wrapper around any next-frame predictor that
// copies received frames and substitutes the pending prediction for lost
// ones, feeding whichever frame it emitted back into the predictor.
//
//   y_t          = M_t ? x_t : pending
//   pending', s' = R(y_t, s)
//
// The initial pending prediction is the zero frame.

#ifndef PLC_CONCEAL_H_
#define PLC_CONCEAL_H_

#include <algorithm>
#include <concepts>
#include <type_traits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "plc/frames.h"
#include "plc/rnn_core.h"

namespace plc {

template <typename State>
struct CellOutput {
  VectorD next_frame;
  State state;
};

// A recurrent next-frame predictor R(y, s) -> (next frame estimate, s').
template <typename C>
concept FrameCell = requires(const C& cell, const VectorD& frame,
                             const typename C::State& state) {
  { cell.frame_len() } -> std::convertible_to<int>;
  { cell.InitialState() } -> std::convertible_to<typename C::State>;
  { cell.Predict(frame, state) } -> std::convertible_to<CellOutput<typename C::State>>;
};

// Adapts stacked LSTM parameters to FrameCell, computing in `Scalar`. Holds a
// non-owning reference; the parameters must outlive the cell. Any number of
// cells may share one parameter set across threads.
template <typename Scalar>
class NeuralCell {
 public:
  using State = StackedState<Scalar>;

  explicit NeuralCell(const StackedCellParams<Scalar>& params)
      : params_(&params) {
    params.Validate();
  }

  int frame_len() const { return params_->input_size(); }
  State InitialState() const { return ZeroStates(*params_); }

  CellOutput<State> Predict(const VectorD& frame, const State& state) const {
    if constexpr (std::is_same_v<Scalar, double>) {
      auto step = StackedStep<double>(*params_, frame, state);
      return {std::move(step.prediction), std::move(step.states)};
    } else {
      const Vector<Scalar> input = frame.cast<Scalar>();
      auto step = StackedStep<Scalar>(*params_, input, state);
      return {step.prediction.template cast<double>(), std::move(step.states)};
    }
  }

 private:
  const StackedCellParams<Scalar>* params_;
};

template <typename State>
struct ConcealState {
  VectorD pending_prediction;  // estimate of the next frame
  State inner;
};

template <FrameCell Cell>
ConcealState<typename Cell::State> InitialConcealState(const Cell& cell) {
  return {VectorD::Zero(cell.frame_len()), cell.InitialState()};
}

template <typename State>
struct ConcealStepResult {
  VectorD output;
  ConcealState<State> state;
};

// One step of the concealment cell. `received` must be 0 or 1. The content of
// a lost frame is ignored.
template <FrameCell Cell>
ConcealStepResult<typename Cell::State> ConcealStep(
    const Cell& cell, std::span<const double> frame, int received,
    const ConcealState<typename Cell::State>& prev) {
  if (received != 0 && received != 1) {
    throw std::invalid_argument("ConcealStep: mask flag must be 0 or 1, got " +
                                std::to_string(received));
  }
  const auto frame_len = static_cast<size_t>(cell.frame_len());
  if (frame.size() != frame_len ||
      static_cast<size_t>(prev.pending_prediction.size()) != frame_len) {
    throw std::invalid_argument("ConcealStep: frame has " +
                                std::to_string(frame.size()) +
                                " samples, cell expects " +
                                std::to_string(frame_len));
  }
  ConcealStepResult<typename Cell::State> result;
  result.output = received == 1
                      ? VectorD(Eigen::Map<const VectorD>(frame.data(), frame_len))
                      : prev.pending_prediction;
  auto predicted = cell.Predict(result.output, prev.inner);
  result.state.pending_prediction = std::move(predicted.next_frame);
  result.state.inner = std::move(predicted.state);
  return result;
}

// Stateful frame-in, frame-out concealer for real-time use.
template <FrameCell Cell>
class StreamingConcealer {
 public:
  explicit StreamingConcealer(Cell cell)
      : cell_(std::move(cell)), state_(InitialConcealState(cell_)) {}

  VectorD Push(std::span<const double> frame, bool received) {
    auto step = ConcealStep(cell_, frame, received ? 1 : 0, state_);
    state_ = std::move(step.state);
    return std::move(step.output);
  }

  // Receives nothing for this frame; returns the concealed estimate.
  VectorD PushLost() {
    const VectorD zeros = VectorD::Zero(cell_.frame_len());
    return Push(std::span<const double>(zeros.data(), zeros.size()), false);
  }

  void Reset() { state_ = InitialConcealState(cell_); }

  const ConcealState<typename Cell::State>& state() const { return state_; }

 private:
  Cell cell_;
  ConcealState<typename Cell::State> state_;
};

// Conceals a whole sequence by folding ConcealStep from the initial state.
template <FrameCell Cell>
FrameSequence ConcealSequence(const Cell& cell, const FrameSequence& frames,
                              const LossMask& mask) {
  CheckMaskMatches(frames, mask, "ConcealSequence");
  if (frames.frame_len() != cell.frame_len()) {
    throw std::invalid_argument("ConcealSequence: frame length " +
                                std::to_string(frames.frame_len()) +
                                " does not match the model's " +
                                std::to_string(cell.frame_len()));
  }
  FrameSequence out(frames.num_frames(), frames.frame_len(),
                    frames.sample_rate(), frames.true_length());
  StreamingConcealer<Cell> stream(cell);
  for (size_t t = 0; t < frames.num_frames(); ++t) {
    const VectorD y = stream.Push(frames.frame(t), mask.received(t));
    std::copy(y.data(), y.data() + y.size(), out.frame(t).begin());
  }
  return out;
}

// Averages a forward pass with a time-reversed pass of `backward_cell` (a
// model trained on reversed audio). Needs the whole sequence, so it is not
// usable for streaming.
template <FrameCell ForwardCell, FrameCell BackwardCell>
FrameSequence ConcealBidirectional(const ForwardCell& forward_cell,
                                   const BackwardCell& backward_cell,
                                   const FrameSequence& frames,
                                   const LossMask& mask) {
  if (forward_cell.frame_len() != backward_cell.frame_len()) {
    throw std::invalid_argument(
        "ConcealBidirectional: models disagree on frame length");
  }
  const FrameSequence forward = ConcealSequence(forward_cell, frames, mask);
  const FrameSequence backward =
      ConcealSequence(backward_cell, frames.Reversed(), mask.Reversed())
          .Reversed();
  FrameSequence out = forward;
  auto dst = out.mutable_samples();
  const auto bwd = backward.samples();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = (dst[i] + bwd[i]) / 2.0;
  return out;
}

// Neural concealment with trained parameters.
FrameSequence ConcealForward(const StackedCellParams<double>& model,
                             const FrameSequence& frames, const LossMask& mask);
FrameSequence ConcealForward(const StackedCellParams<float>& model,
                             const FrameSequence& frames, const LossMask& mask);
FrameSequence ConcealBidirectional(const StackedCellParams<double>& forward,
                                   const StackedCellParams<double>& backward,
                                   const FrameSequence& frames,
                                   const LossMask& mask);
FrameSequence ConcealBidirectional(const StackedCellParams<float>& forward,
                                   const StackedCellParams<float>& backward,
                                   const FrameSequence& frames,
                                   const LossMask& mask);

}  // namespace plc

#endif  // PLC_CONCEAL_H_
