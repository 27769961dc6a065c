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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lbr/types.hpp"

namespace lbr::session {

enum class Outcome : std::uint8_t { ON_TIME, LATE, MISSING };

const char* to_string(Outcome o);

inline constexpr std::size_t kQualityWindow = 100;

struct WatchdogConfig {
  Nanos sample_period{std::chrono::milliseconds(5)};
  double deadline_factor{3.0};
  std::uint32_t activation_streak{10};

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
  Nanos deadline() const;
};

/// r = (late + missing) / len; r <= 1% EXCELLENT, <= 5% GOOD, <= 10% FAIR,
/// otherwise POOR. An empty window is POOR.
ConnectionQuality classify_quality(std::span<const Outcome> window);
ConnectionQuality classify_counts(std::size_t late_or_missing, std::size_t window_length);

/// Latency <= period: on time. <= period * factor: late. Beyond, or no
/// answer at all: missing.
Outcome answer_outcome(Nanos monitor_sent_at, std::optional<Nanos> answer_received_at, const WatchdogConfig& cfg);

/// Ring buffer over the last kQualityWindow outcomes.
class OutcomeWindow {
 public:
  void push(Outcome o);
  void clear();
  std::size_t size() const { return size_; }
  std::size_t late_or_missing() const { return bad_; }
  std::vector<Outcome> contents() const;  // oldest first

 private:
  std::array<Outcome, kQualityWindow> buf_{};
  std::size_t head_{0};
  std::size_t size_{0};
  std::size_t bad_{0};
};

/// Reported link quality. Downgrades take effect on the outcome that causes
/// them; upgrades are only evaluated every kQualityWindow outcomes counted
/// from the last reset.
class QualityEstimator {
 public:
  ConnectionQuality push(Outcome o);
  void reset();

  ConnectionQuality reported() const { return reported_; }
  const OutcomeWindow& window() const { return window_; }
  std::uint64_t outcomes_since_reset() const { return since_reset_; }

 private:
  OutcomeWindow window_;
  ConnectionQuality reported_{ConnectionQuality::POOR};
  std::uint64_t since_reset_{0};
};

}  // namespace lbr::session
