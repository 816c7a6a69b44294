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

#include "plc/optimizer.h"

#include <cmath>
#include <span>
#include <vector>

namespace plc {
namespace {

std::vector<std::span<double>> Flatten(StackedCellParams<double>& p) {
  std::vector<std::span<double>> out;
  p.ForEachTensor([&](const std::string&, std::span<double> values,
                      const std::vector<uint32_t>&) { out.push_back(values); });
  return out;
}

std::vector<std::span<const double>> Flatten(
    const StackedCellParams<double>& p) {
  std::vector<std::span<const double>> out;
  p.ForEachTensor([&](const std::string&, std::span<const double> values,
                      const std::vector<uint32_t>&) { out.push_back(values); });
  return out;
}

}  // namespace

Adam::Adam(const StackedCellParams<double>& like, AdamConfig config)
    : config_(config),
      first_moment_(like.ZerosLike()),
      second_moment_(like.ZerosLike()) {}

void Adam::Step(StackedCellParams<double>& params,
                const StackedCellParams<double>& grads, double lr) {
  const double step_lr = CurrentLearningRate(lr);
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);

  auto p = Flatten(params);
  auto g = Flatten(grads);
  auto m = Flatten(first_moment_);
  auto v = Flatten(second_moment_);
  for (size_t k = 0; k < p.size(); ++k) {
    for (size_t i = 0; i < p[k].size(); ++i) {
      const double gi = g[k][i];
      m[k][i] = config_.beta1 * m[k][i] + (1.0 - config_.beta1) * gi;
      v[k][i] = config_.beta2 * v[k][i] + (1.0 - config_.beta2) * gi * gi;
      const double m_hat = m[k][i] / correction1;
      const double v_hat = v[k][i] / correction2;
      p[k][i] -= step_lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace plc
