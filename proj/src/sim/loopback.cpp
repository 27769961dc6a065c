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

#include "lbr/sim/loopback.hpp"

#include <algorithm>

namespace lbr::sim {

void Loopback::send_to_sim(wire::Bytes bytes, Nanos delay, std::uint64_t tag) {
  in_flight_.push_back({Datagram{std::move(bytes), now_ + delay, 0, tag}, order_++});
}

void Loopback::step() {
  // Everything that has arrived by now, in arrival order.
  std::vector<InFlight> due;
  auto split = std::stable_partition(in_flight_.begin(), in_flight_.end(),
                                     [&](const InFlight& f) { return f.datagram.arrival > now_; });
  due.assign(std::make_move_iterator(split), std::make_move_iterator(in_flight_.end()));
  in_flight_.erase(split, in_flight_.end());
  std::sort(due.begin(), due.end(), [](const InFlight& a, const InFlight& b) {
    return a.datagram.arrival != b.datagram.arrival ? a.datagram.arrival < b.datagram.arrival : a.order < b.order;
  });
  std::vector<Datagram> inbox;
  inbox.reserve(due.size());
  for (auto& f : due) inbox.push_back(std::move(f.datagram));

  const auto outgoing = sim_.tick(inbox, now_);
  for (const Outgoing& o : outgoing) {
    for (Reply& r : driver_.on_datagram(o.bytes, now_)) send_to_sim(std::move(r.bytes), r.delay, r.tag);
  }
  now_ += sim_.config().sample_period;
  ++ticks_;
}

void Loopback::run_ticks(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) step();
}

bool Loopback::run_until(const std::function<bool()>& done, std::uint64_t max_ticks) {
  for (std::uint64_t i = 0; i < max_ticks; ++i) {
    if (done()) return true;
    step();
  }
  return done();
}

std::vector<Reply> SessionDriver::on_datagram(std::span<const std::uint8_t> bytes, Nanos) {
  std::vector<Reply> replies;
  for (auto& b : session_.on_datagram(bytes)) replies.push_back({std::move(b), delay_(), 0});
  return replies;
}

}  // namespace lbr::sim
