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

#include "plc/metrics.h"

#include <stdexcept>
#include <string>

namespace plc {
namespace {

void CheckInputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("CCC: length mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("CCC: need at least 2 samples");
  }
}

double Denominator(const CccComponents& m) {
  const double mean_diff = m.mean_x - m.mean_y;
  return m.var_x + m.var_y + mean_diff * mean_diff + kCccEpsilon;
}

}  // namespace

CccComponents ComputeCccComponents(std::span<const double> x,
                                   std::span<const double> y) {
  CheckInputs(x, y);
  const double n = static_cast<double>(x.size());
  CccComponents m;
  for (size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.var_x += dx * dx;
    m.var_y += dy * dy;
    m.cov_xy += dx * dy;
  }
  m.var_x /= n;
  m.var_y /= n;
  m.cov_xy /= n;
  return m;
}

double Ccc(std::span<const double> x, std::span<const double> y) {
  // Built from symmetric moments so that Ccc(x, y) == Ccc(y, x) exactly.
  const CccComponents m = ComputeCccComponents(x, y);
  return 2.0 * m.cov_xy / Denominator(m);
}

double CccLoss(std::span<const double> x, std::span<const double> y) {
  return 1.0 - Ccc(x, y);
}

double CccLossWithGradient(std::span<const double> target,
                           std::span<const double> prediction,
                           std::vector<double>& grad_prediction) {
  const CccComponents m = ComputeCccComponents(target, prediction);
  const double n = static_cast<double>(target.size());
  const double den = Denominator(m);
  const double num = 2.0 * m.cov_xy;
  const double mean_diff = m.mean_x - m.mean_y;
  // d num / dy_j = 2 (x_j - mean_x) / n
  // d den / dy_j = 2 (y_j - mean_y) / n - 2 (mean_x - mean_y) / n
  grad_prediction.resize(prediction.size());
  const double inv_den2 = 1.0 / (den * den);
  for (size_t j = 0; j < prediction.size(); ++j) {
    const double d_num = 2.0 * (target[j] - m.mean_x) / n;
    const double d_den =
        2.0 * (prediction[j] - m.mean_y) / n - 2.0 * mean_diff / n;
    grad_prediction[j] = -(d_num * den - num * d_den) * inv_den2;
  }
  return 1.0 - num / den;
}

}  // namespace plc
