/*
 * Copyright (c) 2026 lbr-kit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lbr/client/filter.hpp"

#include <stdexcept>

namespace lbr::client {

ExponentialFilter::ExponentialFilter(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("filter alpha must lie in [0, 1]");
}

JointArray ExponentialFilter::step(const JointArray& input) {
  if (!previous_) {
    previous_ = input;
    return input;
  }
  JointArray out;
  for (std::size_t i = 0; i < kNumJoints; ++i) out[i] = alpha_ * input[i] + (1.0 - alpha_) * (*previous_)[i];
  previous_ = out;
  return out;
}

}  // namespace lbr::client
