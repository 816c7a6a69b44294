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

#include "plc/rnn_core.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace plc {

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kLinear:
      return "linear";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

VectorD DropoutMask(double rate, int dim, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("DropoutMask: rate must be in [0, 1), got " +
                                std::to_string(rate));
  }
  if (dim < 0) throw std::invalid_argument("DropoutMask: negative dim");
  VectorD mask = VectorD::Ones(dim);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int i = 0; i < dim; ++i) {
    mask[i] = rng.Uniform() < rate ? 0.0 : keep_scale;
  }
  return mask;
}

VectorD DropoutMask(double rate, int dim, uint64_t seed) {
  Rng rng(seed);
  return DropoutMask(rate, dim, rng);
}

StackedCellParams<double> InitStackedCell(int frame_len,
                                          std::span<const int> lstm_units,
                                          std::span<const int> dense_units,
                                          Rng& rng) {
  if (frame_len < 1) throw std::invalid_argument("frame_len must be >= 1");
  if (lstm_units.empty() || dense_units.empty()) {
    throw std::invalid_argument("need at least one LSTM and one dense layer");
  }
  StackedCellParams<double> params;
  int width = frame_len;
  for (int hidden : lstm_units) {
    if (hidden < 1) throw std::invalid_argument("LSTM units must be >= 1");
    auto layer = LstmParams<double>::Zero(width, hidden);
    const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (Eigen::Index i = 0; i < layer.w_input.size(); ++i) {
      layer.w_input.data()[i] = rng.Uniform(-k, k);
    }
    for (Eigen::Index i = 0; i < layer.w_recurrent.size(); ++i) {
      layer.w_recurrent.data()[i] = rng.Uniform(-k, k);
    }
    layer.bias.segment(hidden, hidden).setOnes();
    params.lstm.push_back(std::move(layer));
    width = hidden;
  }
  for (int units : dense_units) {
    if (units < 1) throw std::invalid_argument("dense units must be >= 1");
    auto layer = DenseParams<double>::Zero(width, units, Activation::kTanh);
    const double k = 1.0 / std::sqrt(static_cast<double>(width));
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = rng.Uniform(-k, k);
    }
    params.dense.push_back(std::move(layer));
    width = units;
  }
  params.Validate();
  return params;
}

LstmState<double> LstmStepForward(const LstmParams<double>& params,
                                  const Eigen::Ref<const VectorD>& input,
                                  const LstmState<double>& state,
                                  LstmStepCache& cache) {
  const int hidden = params.hidden_size();
  if (input.size() != params.input_size() || state.h.size() != hidden ||
      state.c.size() != hidden) {
    throw std::invalid_argument("LstmStepForward: dimension mismatch");
  }
  const VectorD pre =
      params.w_input * input + params.w_recurrent * state.h + params.bias;
  cache.input = input;
  cache.h_prev = state.h;
  cache.c_prev = state.c;
  cache.gates.resize(4 * hidden);
  cache.gates.segment(0, hidden) =
      internal::Sigmoid(pre.segment(0, hidden).array()).matrix();
  cache.gates.segment(hidden, hidden) =
      internal::Sigmoid(pre.segment(hidden, hidden).array()).matrix();
  cache.gates.segment(2 * hidden, hidden) =
      pre.segment(2 * hidden, hidden).array().tanh().matrix();
  cache.gates.segment(3 * hidden, hidden) =
      internal::Sigmoid(pre.segment(3 * hidden, hidden).array()).matrix();
  const auto i = cache.gates.segment(0, hidden).array();
  const auto f = cache.gates.segment(hidden, hidden).array();
  const auto g = cache.gates.segment(2 * hidden, hidden).array();
  const auto o = cache.gates.segment(3 * hidden, hidden).array();
  cache.c = (f * state.c.array() + i * g).matrix();
  cache.tanh_c = cache.c.array().tanh().matrix();
  cache.h = (o * cache.tanh_c.array()).matrix();
  return {cache.h, cache.c};
}

LstmStepGradients LstmStepBackward(const LstmParams<double>& params,
                                   const LstmStepCache& cache,
                                   const Eigen::Ref<const VectorD>& d_h,
                                   const Eigen::Ref<const VectorD>& d_c,
                                   LstmParams<double>& grads) {
  const int hidden = params.hidden_size();
  if (d_h.size() != hidden || d_c.size() != hidden ||
      cache.gates.size() != 4 * hidden) {
    throw std::invalid_argument("LstmStepBackward: dimension mismatch");
  }
  const auto i = cache.gates.segment(0, hidden).array();
  const auto f = cache.gates.segment(hidden, hidden).array();
  const auto g = cache.gates.segment(2 * hidden, hidden).array();
  const auto o = cache.gates.segment(3 * hidden, hidden).array();
  const auto tc = cache.tanh_c.array();

  const Eigen::ArrayXd d_c_total =
      d_c.array() + d_h.array() * o * (1.0 - tc.square());
  VectorD d_pre(4 * hidden);
  d_pre.segment(0, hidden) = (d_c_total * g * i * (1.0 - i)).matrix();
  d_pre.segment(hidden, hidden) =
      (d_c_total * cache.c_prev.array() * f * (1.0 - f)).matrix();
  d_pre.segment(2 * hidden, hidden) = (d_c_total * i * (1.0 - g.square())).matrix();
  d_pre.segment(3 * hidden, hidden) = (d_h.array() * tc * o * (1.0 - o)).matrix();

  grads.w_input.noalias() += d_pre * cache.input.transpose();
  grads.w_recurrent.noalias() += d_pre * cache.h_prev.transpose();
  grads.bias += d_pre;

  LstmStepGradients out;
  out.d_input.noalias() = params.w_input.transpose() * d_pre;
  out.d_h_prev.noalias() = params.w_recurrent.transpose() * d_pre;
  out.d_c_prev = (d_c_total * f).matrix();
  return out;
}

VectorD DenseForwardCached(const DenseParams<double>& params,
                           const Eigen::Ref<const VectorD>& input,
                           DenseCache& cache) {
  cache.input = input;
  cache.output = DenseForward(params, input);
  return cache.output;
}

VectorD DenseBackward(const DenseParams<double>& params,
                      const DenseCache& cache,
                      const Eigen::Ref<const VectorD>& d_output,
                      DenseParams<double>& grads) {
  if (d_output.size() != params.output_size()) {
    throw std::invalid_argument("DenseBackward: gradient size mismatch");
  }
  VectorD d_pre = d_output;
  if (params.activation == Activation::kTanh) {
    d_pre.array() *= 1.0 - cache.output.array().square();
  }
  grads.weight.noalias() += d_pre * cache.input.transpose();
  grads.bias += d_pre;
  return params.weight.transpose() * d_pre;
}

std::vector<VectorD> ForwardSequence(const StackedCellParams<double>& params,
                                     std::span<const VectorD> inputs,
                                     SequenceTape* tape, double dropout_rate,
                                     Rng* dropout_rng) {
  const bool use_dropout = dropout_rng != nullptr && dropout_rate > 0.0;
  const size_t layers = params.lstm.size();
  if (tape != nullptr) {
    tape->lstm_.assign(inputs.size(), std::vector<LstmStepCache>(layers));
    tape->dense_.assign(inputs.size(),
                        std::vector<DenseCache>(params.dense.size()));
    tape->dropout_.assign(use_dropout ? inputs.size() : 0,
                          std::vector<VectorD>(layers));
  }
  StackedState<double> states = ZeroStates(params);
  std::vector<VectorD> outputs;
  outputs.reserve(inputs.size());
  LstmStepCache scratch;
  DenseCache dense_scratch;
  for (size_t t = 0; t < inputs.size(); ++t) {
    if (inputs[t].size() != params.input_size()) {
      throw std::invalid_argument(
          "ForwardSequence: frame " + std::to_string(t) + " has " +
          std::to_string(inputs[t].size()) + " samples, expected " +
          std::to_string(params.input_size()));
    }
    VectorD x = inputs[t];
    for (size_t k = 0; k < layers; ++k) {
      LstmStepCache& cache = tape != nullptr ? tape->lstm_[t][k] : scratch;
      states[k] = LstmStepForward(params.lstm[k], x, states[k], cache);
      x = states[k].h;
      if (use_dropout) {
        VectorD mask = DropoutMask(dropout_rate, static_cast<int>(x.size()),
                                   *dropout_rng);
        x.array() *= mask.array();
        if (tape != nullptr) tape->dropout_[t][k] = std::move(mask);
      }
    }
    for (size_t k = 0; k < params.dense.size(); ++k) {
      DenseCache& cache = tape != nullptr ? tape->dense_[t][k] : dense_scratch;
      x = DenseForwardCached(params.dense[k], x, cache);
    }
    outputs.push_back(std::move(x));
  }
  return outputs;
}

std::vector<VectorD> BackwardSequence(const StackedCellParams<double>& params,
                                      const SequenceTape& tape,
                                      std::span<const VectorD> output_grads,
                                      StackedCellParams<double>& grads) {
  if (tape.empty()) {
    throw std::logic_error("BackwardSequence: no recorded forward pass");
  }
  if (output_grads.size() != tape.steps()) {
    throw std::invalid_argument(
        "BackwardSequence: " + std::to_string(output_grads.size()) +
        " output gradients for a tape of " + std::to_string(tape.steps()) +
        " steps");
  }
  const size_t layers = params.lstm.size();
  std::vector<VectorD> d_h_next(layers);
  std::vector<VectorD> d_c_next(layers);
  for (size_t k = 0; k < layers; ++k) {
    d_h_next[k] = VectorD::Zero(params.lstm[k].hidden_size());
    d_c_next[k] = VectorD::Zero(params.lstm[k].hidden_size());
  }
  std::vector<VectorD> input_grads(tape.steps());
  for (size_t t = tape.steps(); t-- > 0;) {
    if (output_grads[t].size() != params.output_size()) {
      throw std::invalid_argument("BackwardSequence: gradient " +
                                  std::to_string(t) + " has wrong size");
    }
    VectorD d = output_grads[t];
    for (size_t k = params.dense.size(); k-- > 0;) {
      d = DenseBackward(params.dense[k], tape.dense_[t][k], d, grads.dense[k]);
    }
    // d is now the gradient w.r.t. the (dropped-out) top LSTM output.
    for (size_t k = layers; k-- > 0;) {
      if (!tape.dropout_.empty()) d.array() *= tape.dropout_[t][k].array();
      d += d_h_next[k];
      LstmStepGradients step = LstmStepBackward(
          params.lstm[k], tape.lstm_[t][k], d, d_c_next[k], grads.lstm[k]);
      d_h_next[k] = std::move(step.d_h_prev);
      d_c_next[k] = std::move(step.d_c_prev);
      d = std::move(step.d_input);
    }
    input_grads[t] = std::move(d);
  }
  return input_grads;
}

}  // namespace plc
