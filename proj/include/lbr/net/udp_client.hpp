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

#include <functional>
#include <string>

#include "lbr/client/client.hpp"
#include "lbr/net/socket.hpp"

namespace lbr::net {

struct UdpClientOptions {
  std::string host{"127.0.0.1"};
  std::uint16_t port{30200};
  /// Artificial delay before each answer is sent; none when empty.
  std::function<Nanos()> delay;
  Nanos join_timeout{std::chrono::seconds(5)};
  /// Silence from the server after the first monitor that counts as a lost
  /// link.
  Nanos link_timeout{std::chrono::seconds(2)};
};

enum class UdpClientResult { Stopped, ServerBye, Aborted, JoinTimeout, LinkLost };

const char* to_string(UdpClientResult r);

/// Runs `session` over UDP until `stop()` returns true (the client then says
/// BYE), the server ends the session, or the link fails. `stop` is checked
/// after every received datagram and at least every 10 ms.
UdpClientResult run_udp_client(client::ClientSession& session, const UdpClientOptions& opts,
                               const std::function<bool()>& stop);

}  // namespace lbr::net
