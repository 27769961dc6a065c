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

#include <ostream>

#include "lbr/cli/cli.hpp"

namespace lbr::cli {

int run_decode(const std::string& hex, std::ostream& out, std::ostream& err) {
  wire::Bytes bytes;
  try {
    bytes = wire::parse_hex(hex);
  } catch (const std::invalid_argument& e) {
    err << "decode: " << e.what() << '\n';
    return kExitConfig;
  }
  out << wire::dump_frame(bytes);
  return kExitOk;
}

}  // namespace lbr::cli
