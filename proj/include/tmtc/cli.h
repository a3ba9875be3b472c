// Copyright 2026 The TMTC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Subcommands: derive, apply, construct, stats,
// eval, quantexp, m2, loss.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#ifndef TMTC_CLI_H_
#define TMTC_CLI_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace tmtc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kSeedEnvVar = "TMTC_SEED";

// Everything that determines a run's output. Echoed into every JSON report
// under "config".
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> inputs;
  std::string strategy;
  std::uint64_t seed = kDefaultSeed;
  double beta = 0.5;
  int annotator = 0;
  int workers = 1;
  bool include_original = true;
  bool invert_typefirst = false;
  bool kind_only = false;
  bool sentinel = true;
};

nlohmann::ordered_json ConfigToJson(const RunConfig& config);

// Default seed: $TMTC_SEED when set, otherwise kDefaultSeed. Throws
// std::invalid_argument if the variable is not an unsigned integer.
std::uint64_t DefaultSeed();

// Runs one command line (args[0] is the program name).
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tmtc::cli

#endif  // TMTC_CLI_H_
