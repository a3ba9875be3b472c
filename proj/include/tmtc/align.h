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

// Token-level edit scripts.
//
// Align() runs a unit-cost Levenshtein DP (match 0, replace/insert/delete 1)
// and backtracks from the bottom-right cell, preferring at every cell
// Equal > Replace > Delete > Insert among moves that stay on an optimal path.
// Consecutive inserts at one anchor are coalesced into a single InsertRun.
//
// An "error unit" is one non-Equal op: each Replace, each Delete and each
// whole InsertRun counts once regardless of run length.

#ifndef TMTC_ALIGN_H_
#define TMTC_ALIGN_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmtc/textcore.h"

namespace tmtc {

// The three correcting actions of the label space. InsertRun units map to
// kAppend.
enum class ActionKind { kAppend, kDelete, kReplace };

inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::kAppend, ActionKind::kDelete, ActionKind::kReplace};

// "append", "delete", "replace".
std::string_view ActionKindName(ActionKind kind);
// "app", "del", "rep".
std::string_view ActionKindAbbrev(ActionKind kind);
// Accepts full names, abbreviations and the "$APPEND"/"$DELETE"/"$REPLACE"
// spellings, case-insensitively.
std::optional<ActionKind> ParseActionKind(std::string_view text);

struct EditOp {
  enum class Kind { kEqual, kReplace, kDelete, kInsertRun };

  Kind kind = Kind::kEqual;
  // Source offset. For kInsertRun, the offset of the source token the run
  // follows, or -1 for a run before the first token.
  int src_pos = 0;
  // Set for kEqual, kReplace and kDelete.
  std::optional<std::string> src_token;
  // kReplace: exactly one token; kInsertRun: one or more; otherwise empty.
  std::vector<std::string> new_tokens;

  bool is_error_unit() const { return kind != Kind::kEqual; }

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

// Action kind of an error unit. Must not be called on kEqual.
ActionKind UnitActionKind(const EditOp& op);

struct EditScript {
  std::vector<EditOp> ops;
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;

  // Number of non-Equal ops.
  std::size_t NumErrorUnits() const;
  // Indices into `ops` of the error units, in order.
  std::vector<std::size_t> ErrorUnitIndices() const;
  // Token-level cost: one per replaced, deleted or inserted token.
  std::size_t TokenCost() const;

  friend bool operator==(const EditScript&, const EditScript&) = default;
};

EditScript Align(const Sentence& source, const Sentence& target);

// Throws DataError naming the offending position when the script was built
// against a different source.
Sentence ApplyScript(const Sentence& source, const EditScript& script);

// Called with (error-unit ordinal, op) for each error unit.
using UnitPredicate = std::function<bool(std::size_t, const EditOp&)>;

// Keeps the error units accepted by `keep`. Rejected Replace/Delete units
// become Equal ops on the source token; rejected InsertRuns are dropped.
EditScript FilterScript(const EditScript& script, const UnitPredicate& keep);

// Convenience predicates.
UnitPredicate KeepKinds(std::vector<ActionKind> kinds);
UnitPredicate KeepOrdinals(std::vector<std::size_t> sorted_ordinals);

}  // namespace tmtc

#endif  // TMTC_ALIGN_H_
