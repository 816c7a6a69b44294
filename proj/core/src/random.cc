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

#include "plc/random.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plc {

uint64_t Rng::UniformInt(uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("Rng::UniformInt: n must be positive");
  }
  // Largest multiple of n that fits; draws above it are rejected.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % n;
}

double Rng::Normal() {
  // 1 - Uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace plc
