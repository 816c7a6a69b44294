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

// Minimal recurrent substrate: LSTM cells, dense layers, a stacked cell that
// maps one frame to a prediction of the next frame, and hand-written
// reverse-mode gradients for training with backpropagation through time.
//
// Forward passes are templated on the scalar type so that inference can run
// in float; training and gradients are double only.

#ifndef PLC_RNN_CORE_H_
#define PLC_RNN_CORE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "plc/random.h"

namespace plc {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;

// Non-deducing view parameter for the templated forward functions.
template <typename Scalar>
using ConstVectorRef = std::type_identity_t<Eigen::Ref<const Vector<Scalar>>>;

using VectorD = Vector<double>;
using MatrixD = Matrix<double>;

enum class Activation { kTanh, kLinear };

std::string_view ActivationName(Activation activation);
Activation ParseActivation(std::string_view name);

// Weights of one LSTM cell. Gate blocks are stacked row-wise in the order
// (input, forget, candidate, output), each block `hidden_size()` rows tall.
template <typename Scalar>
struct LstmParams {
  Matrix<Scalar> w_input;      // 4H x D
  Matrix<Scalar> w_recurrent;  // 4H x H
  Vector<Scalar> bias;         // 4H

  int hidden_size() const { return static_cast<int>(w_recurrent.cols()); }
  int input_size() const { return static_cast<int>(w_input.cols()); }

  static LstmParams Zero(int input_size, int hidden_size) {
    return {Matrix<Scalar>::Zero(4 * hidden_size, input_size),
            Matrix<Scalar>::Zero(4 * hidden_size, hidden_size),
            Vector<Scalar>::Zero(4 * hidden_size)};
  }

  void Validate() const {
    const auto h = w_recurrent.cols();
    if (h < 1 || w_input.cols() < 1) {
      throw std::invalid_argument("LstmParams: H and D must be >= 1");
    }
    if (w_recurrent.rows() != 4 * h || w_input.rows() != 4 * h ||
        bias.size() != 4 * h) {
      throw std::invalid_argument(
          "LstmParams: expected 4H rows in w_input, w_recurrent and bias "
          "(H = " + std::to_string(h) + ")");
    }
  }
};

template <typename Scalar>
struct LstmState {
  Vector<Scalar> h;
  Vector<Scalar> c;

  static LstmState Zero(int hidden_size) {
    return {Vector<Scalar>::Zero(hidden_size), Vector<Scalar>::Zero(hidden_size)};
  }
};

template <typename Scalar>
struct DenseParams {
  Matrix<Scalar> weight;  // out x in
  Vector<Scalar> bias;    // out
  Activation activation = Activation::kTanh;

  int input_size() const { return static_cast<int>(weight.cols()); }
  int output_size() const { return static_cast<int>(weight.rows()); }

  static DenseParams Zero(int input_size, int output_size,
                          Activation activation) {
    return {Matrix<Scalar>::Zero(output_size, input_size),
            Vector<Scalar>::Zero(output_size), activation};
  }

  void Validate() const {
    if (weight.rows() < 1 || weight.cols() < 1 ||
        bias.size() != weight.rows()) {
      throw std::invalid_argument("DenseParams: bias size must equal rows");
    }
  }
};

// LSTM layers followed by a dense head applied to the top LSTM output. Takes
// a frame and predicts the next one.
template <typename Scalar>
struct StackedCellParams {
  std::vector<LstmParams<Scalar>> lstm;
  std::vector<DenseParams<Scalar>> dense;

  int input_size() const { return lstm.empty() ? 0 : lstm.front().input_size(); }
  int output_size() const {
    return dense.empty() ? 0 : dense.back().output_size();
  }

  void Validate() const;

  template <typename To>
  StackedCellParams<To> Cast() const;

  // Parameters with every entry set to zero and the same shapes and
  // activations as `this`.
  StackedCellParams ZerosLike() const;

  // Calls fn(name, values, shape) for every tensor in a fixed order:
  // lstm.<k>.w_input, lstm.<k>.w_recurrent, lstm.<k>.bias, then
  // dense.<k>.weight, dense.<k>.bias. Shapes are (rows, cols) for matrices and
  // (n) for vectors; storage is row-major.
  template <typename Fn>
  void ForEachTensor(Fn&& fn);
  template <typename Fn>
  void ForEachTensor(Fn&& fn) const;

  size_t ParameterCount() const;
};

template <typename Scalar>
using StackedState = std::vector<LstmState<Scalar>>;

template <typename Scalar>
StackedState<Scalar> ZeroStates(const StackedCellParams<Scalar>& params) {
  StackedState<Scalar> states;
  states.reserve(params.lstm.size());
  for (const auto& layer : params.lstm) {
    states.push_back(LstmState<Scalar>::Zero(layer.hidden_size()));
  }
  return states;
}

namespace internal {

template <typename Derived>
auto Sigmoid(const Eigen::ArrayBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return (S(1) + (-x).exp()).inverse();
}

}  // namespace internal

// One LSTM step. The cell output is the returned state's `h`.
//   i, f, o = sigmoid gates, g = tanh candidate
//   c' = f * c + i * g,   h' = o * tanh(c')
template <typename Scalar>
LstmState<Scalar> LstmStep(const LstmParams<Scalar>& params,
                           const ConstVectorRef<Scalar>& input,
                           const LstmState<Scalar>& state) {
  const int hidden = params.hidden_size();
  if (input.size() != params.input_size()) {
    throw std::invalid_argument(
        "LstmStep: input has " + std::to_string(input.size()) +
        " elements, cell expects " + std::to_string(params.input_size()));
  }
  if (state.h.size() != hidden || state.c.size() != hidden) {
    throw std::invalid_argument("LstmStep: state size does not match H = " +
                                std::to_string(hidden));
  }
  const Vector<Scalar> pre =
      params.w_input * input + params.w_recurrent * state.h + params.bias;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Array i = internal::Sigmoid(pre.segment(0, hidden).array());
  const Array f = internal::Sigmoid(pre.segment(hidden, hidden).array());
  const Array g = pre.segment(2 * hidden, hidden).array().tanh();
  const Array o = internal::Sigmoid(pre.segment(3 * hidden, hidden).array());
  LstmState<Scalar> next;
  next.c = (f * state.c.array() + i * g).matrix();
  next.h = (o * next.c.array().tanh()).matrix();
  return next;
}

template <typename Scalar>
Vector<Scalar> DenseForward(const DenseParams<Scalar>& params,
                            const ConstVectorRef<Scalar>& input) {
  if (input.size() != params.input_size()) {
    throw std::invalid_argument(
        "DenseForward: input has " + std::to_string(input.size()) +
        " elements, layer expects " + std::to_string(params.input_size()));
  }
  Vector<Scalar> out = params.weight * input + params.bias;
  if (params.activation == Activation::kTanh) out = out.array().tanh();
  return out;
}

template <typename Scalar>
struct StackedStepResult {
  Vector<Scalar> prediction;
  StackedState<Scalar> states;
};

// Runs the LSTM stack on one frame (each layer consumes the output of the
// layer below at the same step), then the dense head on the top output.
template <typename Scalar>
StackedStepResult<Scalar> StackedStep(
    const StackedCellParams<Scalar>& params,
    const ConstVectorRef<Scalar>& input_frame,
    const StackedState<Scalar>& states) {
  if (states.size() != params.lstm.size()) {
    throw std::invalid_argument(
        "StackedStep: got " + std::to_string(states.size()) +
        " states for " + std::to_string(params.lstm.size()) + " LSTM layers");
  }
  if (params.lstm.empty() || params.dense.empty()) {
    throw std::invalid_argument("StackedStep: empty stack");
  }
  StackedStepResult<Scalar> result;
  result.states.reserve(states.size());
  Vector<Scalar> x = input_frame;
  for (size_t k = 0; k < params.lstm.size(); ++k) {
    result.states.push_back(LstmStep(params.lstm[k], x, states[k]));
    x = result.states.back().h;
  }
  for (const auto& layer : params.dense) x = DenseForward(layer, x);
  result.prediction = std::move(x);
  return result;
}

// Inverted-dropout mask: each entry is 0 with probability `rate`, otherwise
// 1 / (1 - rate). Requires 0 <= rate < 1.
VectorD DropoutMask(double rate, int dim, Rng& rng);
VectorD DropoutMask(double rate, int dim, uint64_t seed);

// Initialization: LSTM weights uniform in [-1/sqrt(H), 1/sqrt(H)], forget
// bias 1, other biases 0; dense weights uniform in [-1/sqrt(in), 1/sqrt(in)]
// with zero bias. Hidden dense layers and the output layer use tanh.
StackedCellParams<double> InitStackedCell(int frame_len,
                                          std::span<const int> lstm_units,
                                          std::span<const int> dense_units,
                                          Rng& rng);

// ---------------------------------------------------------------------------
// Gradients (double precision).

struct LstmStepCache {
  VectorD input;
  VectorD h_prev;
  VectorD c_prev;
  VectorD gates;  // post-activation (i, f, g, o), 4H
  VectorD c;
  VectorD tanh_c;
  VectorD h;
};

// Forward LSTM step that records what the backward pass needs.
LstmState<double> LstmStepForward(const LstmParams<double>& params,
                                  const Eigen::Ref<const VectorD>& input,
                                  const LstmState<double>& state,
                                  LstmStepCache& cache);

struct LstmStepGradients {
  VectorD d_input;
  VectorD d_h_prev;
  VectorD d_c_prev;
};

// Accumulates dL/dparams into `grads` given dL/dh' and dL/dc' of the step.
LstmStepGradients LstmStepBackward(const LstmParams<double>& params,
                                   const LstmStepCache& cache,
                                   const Eigen::Ref<const VectorD>& d_h,
                                   const Eigen::Ref<const VectorD>& d_c,
                                   LstmParams<double>& grads);

struct DenseCache {
  VectorD input;
  VectorD output;
};

VectorD DenseForwardCached(const DenseParams<double>& params,
                           const Eigen::Ref<const VectorD>& input,
                           DenseCache& cache);

// Accumulates dL/dparams into `grads`; returns dL/dinput.
VectorD DenseBackward(const DenseParams<double>& params,
                      const DenseCache& cache,
                      const Eigen::Ref<const VectorD>& d_output,
                      DenseParams<double>& grads);

// Recorded forward pass of the stacked cell over a sequence, started from
// zero states. Holds every activation needed for exact BPTT.
class SequenceTape {
 public:
  size_t steps() const { return lstm_.size(); }
  bool empty() const { return lstm_.empty(); }

 private:
  friend std::vector<VectorD> ForwardSequence(
      const StackedCellParams<double>&, std::span<const VectorD>,
      SequenceTape*, double, Rng*);
  friend std::vector<VectorD> BackwardSequence(
      const StackedCellParams<double>&, const SequenceTape&,
      std::span<const VectorD>, StackedCellParams<double>&);

  std::vector<std::vector<LstmStepCache>> lstm_;   // [t][layer]
  std::vector<std::vector<VectorD>> dropout_;      // [t][layer], may be empty
  std::vector<std::vector<DenseCache>> dense_;     // [t][layer]
};

// Teacher-forced pass: output[t] = prediction after consuming inputs[0..t].
// When `tape` is non-null the pass is recorded. When `dropout_rng` is non-null
// and `dropout_rate` > 0, an inverted-dropout mask is applied to each LSTM
// layer's output (training mode); the recurrent path is not masked.
std::vector<VectorD> ForwardSequence(const StackedCellParams<double>& params,
                                     std::span<const VectorD> inputs,
                                     SequenceTape* tape = nullptr,
                                     double dropout_rate = 0.0,
                                     Rng* dropout_rng = nullptr);

// Full BPTT through a recorded pass. `output_grads[t]` is dL/doutput[t].
// Accumulates parameter gradients into `grads` and returns dL/dinputs[t].
std::vector<VectorD> BackwardSequence(const StackedCellParams<double>& params,
                                      const SequenceTape& tape,
                                      std::span<const VectorD> output_grads,
                                      StackedCellParams<double>& grads);

// ---------------------------------------------------------------------------
// Template definitions.

template <typename Scalar>
void StackedCellParams<Scalar>::Validate() const {
  if (lstm.empty()) throw std::invalid_argument("stack has no LSTM layers");
  if (dense.empty()) throw std::invalid_argument("stack has no dense layers");
  int width = lstm.front().input_size();
  for (size_t k = 0; k < lstm.size(); ++k) {
    lstm[k].Validate();
    if (lstm[k].input_size() != width) {
      throw std::invalid_argument("LSTM layer " + std::to_string(k) +
                                  " input size " +
                                  std::to_string(lstm[k].input_size()) +
                                  " != previous output " +
                                  std::to_string(width));
    }
    width = lstm[k].hidden_size();
  }
  for (size_t k = 0; k < dense.size(); ++k) {
    dense[k].Validate();
    if (dense[k].input_size() != width) {
      throw std::invalid_argument("dense layer " + std::to_string(k) +
                                  " input size " +
                                  std::to_string(dense[k].input_size()) +
                                  " != previous output " +
                                  std::to_string(width));
    }
    width = dense[k].output_size();
  }
  if (width != input_size()) {
    throw std::invalid_argument(
        "final dense width " + std::to_string(width) +
        " must equal the frame length " + std::to_string(input_size()));
  }
}

template <typename Scalar>
template <typename To>
StackedCellParams<To> StackedCellParams<Scalar>::Cast() const {
  StackedCellParams<To> out;
  for (const auto& l : lstm) {
    out.lstm.push_back({l.w_input.template cast<To>(),
                        l.w_recurrent.template cast<To>(),
                        l.bias.template cast<To>()});
  }
  for (const auto& d : dense) {
    out.dense.push_back({d.weight.template cast<To>(),
                         d.bias.template cast<To>(), d.activation});
  }
  return out;
}

template <typename Scalar>
StackedCellParams<Scalar> StackedCellParams<Scalar>::ZerosLike() const {
  StackedCellParams out;
  for (const auto& l : lstm) {
    out.lstm.push_back(LstmParams<Scalar>::Zero(l.input_size(), l.hidden_size()));
  }
  for (const auto& d : dense) {
    out.dense.push_back(DenseParams<Scalar>::Zero(d.input_size(),
                                                  d.output_size(), d.activation));
  }
  return out;
}

namespace internal {

template <typename Params, typename Fn>
void VisitTensors(Params& params, Fn&& fn) {
  using Value = std::remove_reference_t<decltype(*params.lstm[0].bias.data())>;
  auto name = [](std::string_view kind, size_t k, std::string_view field) {
    return std::string(kind) + "." + std::to_string(k) + "." +
           std::string(field);
  };
  auto visit_matrix = [&](const std::string& n, auto& m) {
    fn(n, std::span<Value>(m.data(), static_cast<size_t>(m.size())),
       std::vector<uint32_t>{static_cast<uint32_t>(m.rows()),
                             static_cast<uint32_t>(m.cols())});
  };
  auto visit_vector = [&](const std::string& n, auto& v) {
    fn(n, std::span<Value>(v.data(), static_cast<size_t>(v.size())),
       std::vector<uint32_t>{static_cast<uint32_t>(v.size())});
  };
  for (size_t k = 0; k < params.lstm.size(); ++k) {
    visit_matrix(name("lstm", k, "w_input"), params.lstm[k].w_input);
    visit_matrix(name("lstm", k, "w_recurrent"), params.lstm[k].w_recurrent);
    visit_vector(name("lstm", k, "bias"), params.lstm[k].bias);
  }
  for (size_t k = 0; k < params.dense.size(); ++k) {
    visit_matrix(name("dense", k, "weight"), params.dense[k].weight);
    visit_vector(name("dense", k, "bias"), params.dense[k].bias);
  }
}

}  // namespace internal

template <typename Scalar>
template <typename Fn>
void StackedCellParams<Scalar>::ForEachTensor(Fn&& fn) {
  internal::VisitTensors(*this, std::forward<Fn>(fn));
}

template <typename Scalar>
template <typename Fn>
void StackedCellParams<Scalar>::ForEachTensor(Fn&& fn) const {
  internal::VisitTensors(*this, std::forward<Fn>(fn));
}

template <typename Scalar>
size_t StackedCellParams<Scalar>::ParameterCount() const {
  size_t n = 0;
  ForEachTensor([&](const std::string&, auto values, const auto&) {
    n += values.size();
  });
  return n;
}

}  // namespace plc

#endif  // PLC_RNN_CORE_H_
