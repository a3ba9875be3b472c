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

// Per-token editing-action labels ($KEEP, $DELETE, $APPEND_t, $REPLACE_t).

#ifndef TMTC_LABELS_H_
#define TMTC_LABELS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmtc/align.h"
#include "tmtc/textcore.h"

namespace tmtc {

struct EditLabel {
  enum class Kind { kKeep, kDelete, kAppend, kReplace };

  Kind kind = Kind::kKeep;
  // Non-empty for kAppend and kReplace, empty otherwise.
  std::string token;

  static EditLabel Keep() { return {Kind::kKeep, {}}; }
  static EditLabel Delete() { return {Kind::kDelete, {}}; }
  static EditLabel Append(std::string t) { return {Kind::kAppend, std::move(t)}; }
  static EditLabel Replace(std::string t) {
    return {Kind::kReplace, std::move(t)};
  }

  bool is_keep() const { return kind == Kind::kKeep; }

  // "$KEEP", "$DELETE", "$APPEND_<t>", "$REPLACE_<t>".
  std::string ToString() const;
  // Inverse of ToString(); nullopt for anything else.
  static std::optional<EditLabel> Parse(std::string_view text);

  friend bool operator==(const EditLabel&, const EditLabel&) = default;
};

// Action kind of a non-Keep label.
std::optional<ActionKind> LabelActionKind(const EditLabel& label);

// One label per source token plus a sentinel slot that anchors insertions
// before the first token. The sentinel only ever holds Keep or Append.
struct LabelSequence {
  EditLabel sentinel;
  std::vector<EditLabel> labels;

  std::size_t size() const { return labels.size(); }
  bool has_sentinel_edit() const { return !sentinel.is_keep(); }

  static LabelSequence AllKeep(std::size_t n);

  friend bool operator==(const LabelSequence&, const LabelSequence&) = default;
};

// Binary error-detection flags: 1 iff the label at that position is not
// Keep. The sentinel is excluded.
using GedLabelSequence = std::vector<std::uint8_t>;

// Labels for one correction pass from `source` toward `target`. Equal ->
// Keep, Replace -> Replace, Delete -> Delete, and an InsertRun after
// position i -> Append(first run token) at i (the sentinel for i == -1).
// Remaining run tokens are left for later passes. A position that already
// carries Replace or Delete keeps it and the Append is deferred.
LabelSequence DeriveLabels(const Sentence& source, const Sentence& target);
LabelSequence LabelsFromScript(const EditScript& script);

// Throws DataError if the label count differs from the source length.
Sentence ApplyLabels(const Sentence& source, const LabelSequence& labels);

struct IterateResult {
  Sentence final;
  int iterations = 0;

  bool converged(const Sentence& target) const { return final == target; }
};

// Alternates DeriveLabels/ApplyLabels until the result equals `target` or
// `max_iters` passes have run. Throws std::invalid_argument if max_iters < 1.
IterateResult IterateDerive(const Sentence& source, const Sentence& target,
                            int max_iters = 5);

GedLabelSequence GedLabels(const LabelSequence& labels);

}  // namespace tmtc

#endif  // TMTC_LABELS_H_
