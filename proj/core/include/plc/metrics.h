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

#ifndef PLC_METRICS_H_
#define PLC_METRICS_H_

#include <span>
#include <vector>

namespace plc {

// Guards the denominator when both inputs are constant and equal.
inline constexpr double kCccEpsilon = 1e-12;

// Population (1/N) moments of a pair of equal-length sequences.
struct CccComponents {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov_xy = 0.0;
};

CccComponents ComputeCccComponents(std::span<const double> x,
                                   std::span<const double> y);

// Concordance correlation coefficient
//   2 cov_xy / (var_x + var_y + (mean_x - mean_y)^2 + eps).
// Requires equal lengths >= 2. Two identical constant inputs give 0.
double Ccc(std::span<const double> x, std::span<const double> y);

// 1 - Ccc(x, y).
double CccLoss(std::span<const double> x, std::span<const double> y);

// Returns 1 - Ccc(target, prediction) and writes dLoss/dprediction into
// `grad_prediction` (resized to match).
double CccLossWithGradient(std::span<const double> target,
                           std::span<const double> prediction,
                           std::vector<double>& grad_prediction);

}  // namespace plc

#endif  // PLC_METRICS_H_
