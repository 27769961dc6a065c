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

#include "lbr/net/control.hpp"

#include "lbr/log.hpp"

namespace lbr::net {

using nlohmann::json;

namespace {

json error(const std::string& what) { return {{"ok", false}, {"error", what}}; }

json stats(const sim::Simulator& sim) {
  const auto& o = sim.outcomes();
  const auto& s = sim.state();
  return {{"ok", true},
          {"tick", s.tick},
          {"state", std::string(to_string(sim.session_state()))},
          {"quality", std::string(to_string(sim.quality()))},
          {"mode", std::string(to_string(s.active_mode))},
          {"protocol_version", sim.agreed_version()},
          {"outcomes", {{"on_time", o.on_time}, {"late", o.late}, {"missing", o.missing}}},
          {"q", model::to_array(s.q)},
          {"decode_errors", sim.decode_errors()},
          {"rejected_commands", sim.rejected_commands()},
          {"commands_applied", sim.commands_applied()}};
}

}  // namespace

json handle_control(sim::Simulator& sim, const json& req) {
  if (!req.is_object() || !req.contains("event") || !req["event"].is_string()) return error("missing \"event\"");
  const std::string event = req["event"];

  if (event == "request_control") {
    const auto mode = parse_command_mode(req.value("mode", "POSITION"));
    if (!mode) return error("unknown mode");
    const auto r = sim.request_control(*mode);
    if (r != sim::OperatorResult::Accepted) return error(sim::to_string(r));
    return {{"ok", true}, {"result", sim::to_string(r)}};
  }
  if (event == "release_control") {
    const auto r = sim.release_control();
    if (r != sim::OperatorResult::Accepted) return error(sim::to_string(r));
    return {{"ok", true}, {"result", sim::to_string(r)}};
  }
  if (event == "inject") {
    if (!req.contains("torque") || !req["torque"].is_array() || req["torque"].size() != kNumJoints)
      return error("\"torque\" needs 7 values");
    JointArray torque{};
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      if (!req["torque"][i].is_number()) return error("\"torque\" needs 7 values");
      torque[i] = req["torque"][i].get<double>();
    }
    const auto ticks = req.value("ticks", 1);
    if (ticks < 0) return error("\"ticks\" must be >= 0");
    sim.inject_disturbance(torque, static_cast<std::uint32_t>(ticks));
    return {{"ok", true}};
  }
  if (event == "stats") return stats(sim);
  return error("unknown event '" + event + "'");
}

std::string handle_control_line(sim::Simulator& sim, const std::string& line) {
  json reply;
  try {
    reply = handle_control(sim, json::parse(line));
  } catch (const json::exception& e) {
    reply = error(std::string("bad request: ") + e.what());
  }
  return reply.dump();
}

ControlServer ControlServer::bind(const std::string& address, std::uint16_t port) {
  return ControlServer(TcpListener::bind(address, port));
}

void ControlServer::poll(sim::Simulator& sim) {
  while (auto c = listener_.accept()) clients_.push_back(std::move(*c));
  for (auto it = clients_.begin(); it != clients_.end();) {
    bool closed = false;
    try {
      for (const auto& line : it->poll_lines(closed)) {
        if (line.empty()) continue;
        it->write_line(handle_control_line(sim, line));
      }
    } catch (const NetError& e) {
      log::debug("control client dropped: %s", e.what());
      closed = true;
    }
    it = closed ? clients_.erase(it) : it + 1;
  }
}

ControlClient ControlClient::connect(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  return ControlClient(LineStream::connect(host, port, timeout));
}

json ControlClient::request(const json& req, std::chrono::milliseconds timeout) {
  stream_.write_line(req.dump());
  const auto line = stream_.read_line(timeout);
  if (!line) throw NetError(NetError::Code::Io, "control reply timed out");
  return json::parse(*line);
}

}  // namespace lbr::net
