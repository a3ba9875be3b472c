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

// Training records and their JSONL encoding.
//
// One JSON object per line, keys in this order:
//
//   {"origin_id": int, "turn": int, "strategy": string,
//    "src": [string], "tgt": [string], "labels": [string], "mask": [0|1]}
//
// labels[i] is one of "$KEEP", "$DELETE", "$APPEND_<t>", "$REPLACE_<t>" and
// len(labels) == len(mask) == len(src). When sentinel rendering is enabled
// and the sentinel slot holds an Append, the sentinel label and its mask bit
// are prepended as element 0 of both arrays and a trailing "sentinel": true
// key is added; such records have len(labels) == len(src) + 1.

#ifndef TMTC_TURN_INSTANCE_H_
#define TMTC_TURN_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tmtc/labels.h"
#include "tmtc/textcore.h"

namespace tmtc {

inline constexpr std::string_view kOriginalTag = "original";

struct TurnInstance {
  std::uint64_t origin_id = 0;
  // 0 for an original instance that was not decomposed.
  int turn = 0;
  std::string strategy;
  Sentence source;
  Sentence target;
  LabelSequence labels;
  // Supervision mask, one bit per label; 0 omits that position's loss.
  std::vector<std::uint8_t> mask;
  std::uint8_t sentinel_mask = 1;

  bool is_original() const { return strategy == kOriginalTag; }

  friend bool operator==(const TurnInstance&, const TurnInstance&) = default;
};

struct JsonlOptions {
  // Render a non-Keep sentinel slot (see the header comment). When false,
  // the sentinel is never written.
  bool sentinel = true;
};

std::string ToJsonLine(const TurnInstance& inst, const JsonlOptions& options);

// Throws DataError on schema violations.
TurnInstance ParseJsonLine(std::string_view line);

// Each record is followed by "\n". Throws DataError if `path` is not
// writable.
void WriteJsonl(const std::vector<TurnInstance>& instances,
                const std::filesystem::path& path,
                const JsonlOptions& options = {});
void WriteJsonl(const std::vector<TurnInstance>& instances, std::ostream& out,
                const JsonlOptions& options = {});

// Blank lines are skipped. Errors carry the 1-based line number.
std::vector<TurnInstance> ReadJsonl(std::istream& in);
std::vector<TurnInstance> ReadJsonl(const std::filesystem::path& path);

}  // namespace tmtc

#endif  // TMTC_TURN_INSTANCE_H_
