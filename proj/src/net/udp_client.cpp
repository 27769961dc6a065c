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

#include "lbr/net/udp_client.hpp"

#include <algorithm>
#include <deque>

#include "lbr/log.hpp"

namespace lbr::net {

const char* to_string(UdpClientResult r) {
  switch (r) {
    case UdpClientResult::Stopped: return "Stopped";
    case UdpClientResult::ServerBye: return "ServerBye";
    case UdpClientResult::Aborted: return "Aborted";
    case UdpClientResult::JoinTimeout: return "JoinTimeout";
    case UdpClientResult::LinkLost: return "LinkLost";
  }
  return "?";
}

UdpClientResult run_udp_client(client::ClientSession& session, const UdpClientOptions& opts,
                               const std::function<bool()>& stop) {
  using Clock = std::chrono::steady_clock;
  UdpSocket socket = UdpSocket::bind("0.0.0.0", 0);
  const Endpoint server = Endpoint::resolve(opts.host, opts.port);

  struct Scheduled {
    Clock::time_point at;
    wire::Bytes bytes;
  };
  std::deque<Scheduled> pending;  // sorted by send time

  const auto started = Clock::now();
  auto last_heard = started;
  auto last_join = started;
  socket.send_to(session.join_frame(), server);

  auto flush_due = [&](Clock::time_point now) {
    while (!pending.empty() && pending.front().at <= now) {
      socket.send_to(pending.front().bytes, server);
      pending.pop_front();
    }
  };

  for (;;) {
    auto now = Clock::now();
    flush_due(now);
    if (stop()) {
      socket.send_to(session.bye_frame(), server);
      return UdpClientResult::Stopped;
    }

    auto wait = std::chrono::milliseconds(10);
    if (!pending.empty()) {
      wait = std::clamp(std::chrono::duration_cast<std::chrono::milliseconds>(pending.front().at - now),
                        std::chrono::milliseconds(0), wait);
    }
    auto received = socket.receive(wait);
    now = Clock::now();

    if (!received) {
      if (session.monitors_received() == 0) {
        if (now - started > opts.join_timeout) return UdpClientResult::JoinTimeout;
        if (now - last_join > std::chrono::seconds(1)) {
          socket.send_to(session.join_frame(), server);
          last_join = now;
        }
      } else if (now - last_heard > opts.link_timeout) {
        return UdpClientResult::LinkLost;
      }
      continue;
    }

    last_heard = now;
    for (auto& reply : session.on_datagram(received->bytes)) {
      const Nanos d = opts.delay ? opts.delay() : Nanos{0};
      if (d.count() <= 0 || session.status() == client::ClientStatus::Aborted) {
        socket.send_to(reply, server);
        continue;
      }
      Scheduled s{now + d, std::move(reply)};
      auto pos = std::upper_bound(pending.begin(), pending.end(), s.at,
                                  [](Clock::time_point t, const Scheduled& x) { return t < x.at; });
      pending.insert(pos, std::move(s));
    }
    if (session.status() == client::ClientStatus::Ended) return UdpClientResult::ServerBye;
    if (session.status() == client::ClientStatus::Aborted) return UdpClientResult::Aborted;
  }
}

}  // namespace lbr::net
