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

#include "lbr/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string_view>

namespace lbr::log {

namespace {

Level from_env() {
  const char* env = std::getenv("LBR_KIT_LOG");
  if (!env) return Level::Warn;
  const std::string_view v(env);
  if (v == "off") return Level::Off;
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

std::atomic<Level>& current() {
  static std::atomic<Level> l{from_env()};
  return l;
}

void emit(Level l, const char* tag, const char* fmt, va_list ap) {
  if (static_cast<int>(l) > static_cast<int>(current().load())) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::fprintf(stderr, "[%s] ", tag);
  std::vfprintf(stderr, fmt, ap);
  std::fputc('\n', stderr);
}

}  // namespace

Level level() { return current().load(); }
void set_level(Level l) { current().store(l); }

#define LBR_LOG_FN(name, lvl, tag)  \
  void name(const char* fmt, ...) { \
    va_list ap;                     \
    va_start(ap, fmt);              \
    emit(lvl, tag, fmt, ap);        \
    va_end(ap);                     \
  }

LBR_LOG_FN(error, Level::Error, "error")
LBR_LOG_FN(warn, Level::Warn, "warn")
LBR_LOG_FN(info, Level::Info, "info")
LBR_LOG_FN(debug, Level::Debug, "debug")

#undef LBR_LOG_FN

}  // namespace lbr::log
