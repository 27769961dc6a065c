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

#pragma once

#include <optional>

#include "lbr/types.hpp"

namespace lbr::client {

/// First-order low-pass: y = alpha * x + (1 - alpha) * y_prev. The first
/// sample after construction or reset() passes through unchanged.
class ExponentialFilter {
 public:
  explicit ExponentialFilter(double alpha = 0.2);

  JointArray step(const JointArray& input);
  void reset() { previous_.reset(); }

  double alpha() const { return alpha_; }
  const std::optional<JointArray>& previous_output() const { return previous_; }

 private:
  double alpha_;
  std::optional<JointArray> previous_;
};

}  // namespace lbr::client
