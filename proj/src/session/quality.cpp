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

#include "lbr/session/quality.hpp"

#include <cmath>
#include <stdexcept>

namespace lbr::session {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::ON_TIME: return "on_time";
    case Outcome::LATE: return "late";
    case Outcome::MISSING: return "missing";
  }
  return "?";
}

void WatchdogConfig::validate() const {
  if (sample_period.count() <= 0) throw std::invalid_argument("sample_period must be > 0");
  if (!(deadline_factor >= 1.0)) throw std::invalid_argument("deadline_factor must be >= 1");
  if (activation_streak < 1) throw std::invalid_argument("activation_streak must be >= 1");
}

Nanos WatchdogConfig::deadline() const {
  return Nanos{static_cast<std::int64_t>(std::llround(static_cast<double>(sample_period.count()) * deadline_factor))};
}

ConnectionQuality classify_quality(std::span<const Outcome> window) {
  std::size_t bad = 0;
  for (Outcome o : window) bad += (o != Outcome::ON_TIME);
  return classify_counts(bad, window.size());
}

ConnectionQuality classify_counts(std::size_t bad, std::size_t n) {
  if (n == 0) return ConnectionQuality::POOR;
  // Integer forms of r <= 0.01, 0.05, 0.10.
  if (bad * 100 <= n) return ConnectionQuality::EXCELLENT;
  if (bad * 20 <= n) return ConnectionQuality::GOOD;
  if (bad * 10 <= n) return ConnectionQuality::FAIR;
  return ConnectionQuality::POOR;
}

Outcome answer_outcome(Nanos monitor_sent_at, std::optional<Nanos> answer_received_at, const WatchdogConfig& cfg) {
  if (!answer_received_at) return Outcome::MISSING;
  const Nanos latency = *answer_received_at - monitor_sent_at;
  if (latency <= cfg.sample_period) return Outcome::ON_TIME;
  if (latency <= cfg.deadline()) return Outcome::LATE;
  return Outcome::MISSING;
}

void OutcomeWindow::push(Outcome o) {
  if (size_ == kQualityWindow) {
    bad_ -= (buf_[head_] != Outcome::ON_TIME);
    buf_[head_] = o;
    head_ = (head_ + 1) % kQualityWindow;
  } else {
    buf_[(head_ + size_) % kQualityWindow] = o;
    ++size_;
  }
  bad_ += (o != Outcome::ON_TIME);
}

void OutcomeWindow::clear() {
  head_ = 0;
  size_ = 0;
  bad_ = 0;
}

std::vector<Outcome> OutcomeWindow::contents() const {
  std::vector<Outcome> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(buf_[(head_ + i) % kQualityWindow]);
  return out;
}

ConnectionQuality QualityEstimator::push(Outcome o) {
  window_.push(o);
  ++since_reset_;
  const ConnectionQuality measured = classify_counts(window_.late_or_missing(), window_.size());
  if (measured < reported_ || since_reset_ % kQualityWindow == 0) reported_ = measured;
  return reported_;
}

void QualityEstimator::reset() {
  window_.clear();
  reported_ = ConnectionQuality::POOR;
  since_reset_ = 0;
}

}  // namespace lbr::session
