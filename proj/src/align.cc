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

#include "tmtc/align.h"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <utility>

#include "tmtc/error.h"

namespace tmtc {
namespace {

using Kind = EditOp::Kind;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void ScriptMismatch(std::size_t op_index, int pos,
                                 const std::string& msg) {
  throw DataError("edit script op " + std::to_string(op_index) +
                  " (source position " + std::to_string(pos) + "): " + msg);
}

}  // namespace

std::string_view ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kAppend: return "append";
    case ActionKind::kDelete: return "delete";
    case ActionKind::kReplace: return "replace";
  }
  return "";
}

std::string_view ActionKindAbbrev(ActionKind kind) {
  switch (kind) {
    case ActionKind::kAppend: return "app";
    case ActionKind::kDelete: return "del";
    case ActionKind::kReplace: return "rep";
  }
  return "";
}

std::optional<ActionKind> ParseActionKind(std::string_view text) {
  std::string s = Lower(text);
  if (!s.empty() && s[0] == '$') s.erase(0, 1);
  if (s == "append" || s == "app") return ActionKind::kAppend;
  if (s == "delete" || s == "del") return ActionKind::kDelete;
  if (s == "replace" || s == "rep") return ActionKind::kReplace;
  return std::nullopt;
}

ActionKind UnitActionKind(const EditOp& op) {
  switch (op.kind) {
    case Kind::kInsertRun: return ActionKind::kAppend;
    case Kind::kDelete: return ActionKind::kDelete;
    case Kind::kReplace: return ActionKind::kReplace;
    case Kind::kEqual: break;
  }
  throw std::logic_error("UnitActionKind called on an Equal op");
}

std::size_t EditScript::NumErrorUnits() const {
  return static_cast<std::size_t>(
      std::count_if(ops.begin(), ops.end(),
                    [](const EditOp& op) { return op.is_error_unit(); }));
}

std::vector<std::size_t> EditScript::ErrorUnitIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].is_error_unit()) out.push_back(i);
  }
  return out;
}

std::size_t EditScript::TokenCost() const {
  std::size_t cost = 0;
  for (const EditOp& op : ops) {
    if (op.kind == Kind::kReplace || op.kind == Kind::kDelete) ++cost;
    if (op.kind == Kind::kInsertRun) cost += op.new_tokens.size();
  }
  return cost;
}

EditScript Align(const Sentence& source, const Sentence& target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return cost[i * width + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag =
          at(i - 1, j - 1) + (source[i - 1] == target[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  // Backtrack; ops come out in reverse order.
  std::vector<EditOp> rev;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = at(i, j);
    if (i > 0 && j > 0 && source[i - 1] == target[j - 1] &&
        at(i - 1, j - 1) == here) {
      rev.push_back({Kind::kEqual, static_cast<int>(i - 1), source[i - 1], {}});
      --i, --j;
    } else if (i > 0 && j > 0 && source[i - 1] != target[j - 1] &&
               at(i - 1, j - 1) + 1 == here) {
      rev.push_back({Kind::kReplace, static_cast<int>(i - 1), source[i - 1],
                     {target[j - 1]}});
      --i, --j;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      rev.push_back({Kind::kDelete, static_cast<int>(i - 1), source[i - 1], {}});
      --i;
    } else {
      // Inserting target[j-1] after source token i-1.
      const int anchor = static_cast<int>(i) - 1;
      if (!rev.empty() && rev.back().kind == Kind::kInsertRun &&
          rev.back().src_pos == anchor) {
        rev.back().new_tokens.push_back(target[j - 1]);
      } else {
        rev.push_back({Kind::kInsertRun, anchor, std::nullopt, {target[j - 1]}});
      }
      --j;
    }
  }

  EditScript script;
  script.src_len = n;
  script.tgt_len = m;
  script.ops.assign(rev.rbegin(), rev.rend());
  for (EditOp& op : script.ops) {
    if (op.kind == Kind::kInsertRun) {
      std::reverse(op.new_tokens.begin(), op.new_tokens.end());
    }
  }
  return script;
}

Sentence ApplyScript(const Sentence& source, const EditScript& script) {
  if (script.src_len != source.size()) {
    throw DataError("edit script expects a " + std::to_string(script.src_len) +
                    "-token source, got " + std::to_string(source.size()));
  }
  std::vector<std::string> out;
  out.reserve(script.tgt_len);
  std::size_t next = 0;
  for (std::size_t k = 0; k < script.ops.size(); ++k) {
    const EditOp& op = script.ops[k];
    if (op.kind == Kind::kInsertRun) {
      if (op.src_pos != static_cast<int>(next) - 1) {
        ScriptMismatch(k, op.src_pos, "insert run out of order");
      }
      if (op.new_tokens.empty()) ScriptMismatch(k, op.src_pos, "empty insert run");
      out.insert(out.end(), op.new_tokens.begin(), op.new_tokens.end());
      continue;
    }
    if (op.src_pos != static_cast<int>(next) || next >= source.size()) {
      ScriptMismatch(k, op.src_pos, "op out of order");
    }
    if (!op.src_token || *op.src_token != source[next]) {
      ScriptMismatch(k, op.src_pos,
                     "source token '" + source[next] + "' does not match '" +
                         op.src_token.value_or("") + "'");
    }
    switch (op.kind) {
      case Kind::kEqual:
        out.push_back(source[next]);
        break;
      case Kind::kReplace:
        if (op.new_tokens.size() != 1) {
          ScriptMismatch(k, op.src_pos, "replace must carry one token");
        }
        out.push_back(op.new_tokens.front());
        break;
      case Kind::kDelete:
      case Kind::kInsertRun:
        break;
    }
    ++next;
  }
  if (next != source.size()) {
    ScriptMismatch(script.ops.size(), static_cast<int>(next),
                   "script ends before the source does");
  }
  return Sentence(std::move(out));
}

EditScript FilterScript(const EditScript& script, const UnitPredicate& keep) {
  EditScript out;
  out.src_len = script.src_len;
  out.ops.reserve(script.ops.size());
  std::size_t ordinal = 0;
  for (const EditOp& op : script.ops) {
    if (!op.is_error_unit()) {
      out.ops.push_back(op);
      continue;
    }
    if (keep(ordinal++, op)) {
      out.ops.push_back(op);
    } else if (op.kind != Kind::kInsertRun) {
      out.ops.push_back({Kind::kEqual, op.src_pos, op.src_token, {}});
    }
  }
  std::size_t tgt_len = 0;
  for (const EditOp& op : out.ops) {
    if (op.kind == Kind::kEqual || op.kind == Kind::kReplace) ++tgt_len;
    if (op.kind == Kind::kInsertRun) tgt_len += op.new_tokens.size();
  }
  out.tgt_len = tgt_len;
  return out;
}

UnitPredicate KeepKinds(std::vector<ActionKind> kinds) {
  return [kinds = std::move(kinds)](std::size_t, const EditOp& op) {
    return std::find(kinds.begin(), kinds.end(), UnitActionKind(op)) !=
           kinds.end();
  };
}

UnitPredicate KeepOrdinals(std::vector<std::size_t> sorted_ordinals) {
  return [ords = std::move(sorted_ordinals)](std::size_t ordinal,
                                             const EditOp&) {
    return std::binary_search(ords.begin(), ords.end(), ordinal);
  };
}

}  // namespace tmtc
