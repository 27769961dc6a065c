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
#include "lbr/conformance/scenario.hpp"

namespace lbr::cli {

int run_conformance(const std::vector<std::filesystem::path>& paths, const std::filesystem::path& config_dir,
                    std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (auto& f : conformance::list_scenarios(p)) files.push_back(std::move(f));
    } else if (std::filesystem::is_regular_file(p)) {
      files.push_back(p);
    } else {
      err << "conformance: no such file or directory: " << p.string() << '\n';
      return kExitConfig;
    }
  }

  if (files.empty()) {
    out << "0 scenarios\n";
    return kExitOk;
  }

  std::size_t passed = 0;
  for (const auto& f : files) {
    conformance::Scenario s;
    conformance::RunResult r;
    try {
      s = conformance::load_scenario(f);
      r = conformance::run_scenario(s, config_dir);
    } catch (const std::exception& e) {
      err << "conformance: " << f.string() << ": " << e.what() << '\n';
      return kExitConfig;
    }
    if (r.passed) {
      ++passed;
      out << "PASS " << s.name << " (" << r.message << ")\n";
    } else {
      out << "FAIL " << s.name << ": " << r.message << '\n';
    }
  }
  out << passed << "/" << files.size() << " scenarios passed\n";
  return passed == files.size() ? kExitOk : kExitConformance;
}

}  // namespace lbr::cli
