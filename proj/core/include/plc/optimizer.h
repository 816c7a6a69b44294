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

#ifndef PLC_OPTIMIZER_H_
#define PLC_OPTIMIZER_H_

#include <cstdint>

#include "plc/rnn_core.h"

namespace plc {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Time-based decay: lr_t = lr / (1 + decay * t), t = updates done so far.
  double decay = 0.0;
};

// Adam with bias correction over a StackedCellParams-shaped parameter set.
class Adam {
 public:
  Adam(const StackedCellParams<double>& like, AdamConfig config);

  // One update with base learning rate `lr` (decayed internally).
  void Step(StackedCellParams<double>& params,
            const StackedCellParams<double>& grads, double lr);

  double CurrentLearningRate(double lr) const {
    return lr / (1.0 + config_.decay * static_cast<double>(steps_));
  }
  int64_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  StackedCellParams<double> first_moment_;
  StackedCellParams<double> second_moment_;
  int64_t steps_ = 0;
};

}  // namespace plc

#endif  // PLC_OPTIMIZER_H_
