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

#include "tmtc/labels.h"

#include <stdexcept>
#include <utility>

#include "tmtc/error.h"

namespace tmtc {
namespace {

constexpr std::string_view kKeepStr = "$KEEP";
constexpr std::string_view kDeleteStr = "$DELETE";
constexpr std::string_view kAppendPrefix = "$APPEND_";
constexpr std::string_view kReplacePrefix = "$REPLACE_";

}  // namespace

std::string EditLabel::ToString() const {
  switch (kind) {
    case Kind::kKeep: return std::string(kKeepStr);
    case Kind::kDelete: return std::string(kDeleteStr);
    case Kind::kAppend: return std::string(kAppendPrefix) + token;
    case Kind::kReplace: return std::string(kReplacePrefix) + token;
  }
  return {};
}

std::optional<EditLabel> EditLabel::Parse(std::string_view text) {
  if (text == kKeepStr) return Keep();
  if (text == kDeleteStr) return Delete();
  if (text.starts_with(kAppendPrefix)) {
    std::string_view t = text.substr(kAppendPrefix.size());
    if (!IsValidToken(t)) return std::nullopt;
    return Append(std::string(t));
  }
  if (text.starts_with(kReplacePrefix)) {
    std::string_view t = text.substr(kReplacePrefix.size());
    if (!IsValidToken(t)) return std::nullopt;
    return Replace(std::string(t));
  }
  return std::nullopt;
}

std::optional<ActionKind> LabelActionKind(const EditLabel& label) {
  switch (label.kind) {
    case EditLabel::Kind::kAppend: return ActionKind::kAppend;
    case EditLabel::Kind::kDelete: return ActionKind::kDelete;
    case EditLabel::Kind::kReplace: return ActionKind::kReplace;
    case EditLabel::Kind::kKeep: break;
  }
  return std::nullopt;
}

LabelSequence LabelSequence::AllKeep(std::size_t n) {
  return {EditLabel::Keep(), std::vector<EditLabel>(n, EditLabel::Keep())};
}

LabelSequence LabelsFromScript(const EditScript& script) {
  LabelSequence out = LabelSequence::AllKeep(script.src_len);
  for (const EditOp& op : script.ops) {
    switch (op.kind) {
      case EditOp::Kind::kEqual:
        break;
      case EditOp::Kind::kReplace:
        out.labels[op.src_pos] = EditLabel::Replace(op.new_tokens.front());
        break;
      case EditOp::Kind::kDelete:
        out.labels[op.src_pos] = EditLabel::Delete();
        break;
      case EditOp::Kind::kInsertRun: {
        EditLabel& slot =
            op.src_pos < 0 ? out.sentinel : out.labels[op.src_pos];
        // Replace/Delete win the collision; the Append waits for a later pass.
        if (slot.is_keep()) slot = EditLabel::Append(op.new_tokens.front());
        break;
      }
    }
  }
  return out;
}

LabelSequence DeriveLabels(const Sentence& source, const Sentence& target) {
  return LabelsFromScript(Align(source, target));
}

Sentence ApplyLabels(const Sentence& source, const LabelSequence& labels) {
  if (labels.size() != source.size()) {
    throw DataError("label sequence has " + std::to_string(labels.size()) +
                    " labels for a " + std::to_string(source.size()) +
                    "-token sentence");
  }
  std::vector<std::string> out;
  out.reserve(source.size() + 1);
  if (labels.sentinel.kind == EditLabel::Kind::kAppend) {
    out.push_back(labels.sentinel.token);
  } else if (!labels.sentinel.is_keep()) {
    throw DataError("sentinel slot may only hold $KEEP or $APPEND");
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    const EditLabel& label = labels.labels[i];
    switch (label.kind) {
      case EditLabel::Kind::kKeep:
        out.push_back(source[i]);
        break;
      case EditLabel::Kind::kDelete:
        break;
      case EditLabel::Kind::kReplace:
        out.push_back(label.token);
        break;
      case EditLabel::Kind::kAppend:
        out.push_back(source[i]);
        out.push_back(label.token);
        break;
    }
  }
  return Sentence(std::move(out));
}

IterateResult IterateDerive(const Sentence& source, const Sentence& target,
                            int max_iters) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  IterateResult result{source, 0};
  while (result.iterations < max_iters) {
    result.final = ApplyLabels(result.final, DeriveLabels(result.final, target));
    ++result.iterations;
    if (result.final == target) break;
  }
  return result;
}

GedLabelSequence GedLabels(const LabelSequence& labels) {
  GedLabelSequence out;
  out.reserve(labels.size());
  for (const EditLabel& l : labels.labels) out.push_back(l.is_keep() ? 0 : 1);
  return out;
}

}  // namespace tmtc
